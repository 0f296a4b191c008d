#pragma once

#include <map>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "kcomm/layer_graph.hpp"

namespace kcomm {

/// Bipartite link set X(from, to): every link (a, b) has a in `from_layer`
/// and b in `to_layer`. Links are kept sorted and unique.
struct InterLayerEdges {
  LayerId from_layer;
  LayerId to_layer;
  std::vector<NodePair> links;

  InterLayerEdges reversed() const;
  void normalize();

  friend bool operator==(const InterLayerEdges&, const InterLayerEdges&) = default;
};

/// Multilayer network MLN(G, X) with globally disjoint node sets.
///
/// Built single-writer through add_layer/add_interlayer; analysis code only
/// ever takes `const MLN&`, which is safe to share across threads.
class MLN {
 public:
  /// Throws DuplicateLayer or NodeIdCollision.
  void add_layer(LayerGraph g);
  /// Throws UnknownLayer, EndpointNotInLayer, DuplicatePair, MalformedGraph.
  void add_interlayer(InterLayerEdges x);

  bool has_layer(const LayerId& id) const { return layers_.contains(id); }
  /// Throws UnknownLayer.
  const LayerGraph& layer(const LayerId& id) const;
  const std::map<LayerId, LayerGraph>& layers() const noexcept { return layers_; }

  bool has_interlayer(const LayerId& a, const LayerId& b) const;
  /// Links oriented as (a-node, b-node). nullopt when no edge set exists.
  std::optional<InterLayerEdges> interlayer(const LayerId& a, const LayerId& b) const;
  /// Stored edge set for the unordered pair plus whether it is stored as (b, a).
  std::pair<const InterLayerEdges*, bool> find_interlayer(const LayerId& a, const LayerId& b) const;
  /// Stored edge sets in registration-independent (key) order.
  std::vector<const InterLayerEdges*> interlayers() const;

  std::optional<LayerId> layer_of(NodeId n) const;

  friend bool operator==(const MLN& a, const MLN& b);

 private:
  static std::pair<LayerId, LayerId> key(const LayerId& a, const LayerId& b) {
    return a < b ? std::pair{a, b} : std::pair{b, a};
  }

  std::map<LayerId, LayerGraph> layers_;
  std::map<std::pair<LayerId, LayerId>, InterLayerEdges> interlayer_;
  std::unordered_map<NodeId, LayerId> owner_;
};

}  // namespace kcomm
