#include "kcomm/mln.hpp"

#include <algorithm>

#include "kcomm/error.hpp"

namespace kcomm {

InterLayerEdges InterLayerEdges::reversed() const {
  InterLayerEdges r{to_layer, from_layer, {}};
  r.links.reserve(links.size());
  for (const auto& [a, b] : links) r.links.emplace_back(b, a);
  std::sort(r.links.begin(), r.links.end());
  return r;
}

void InterLayerEdges::normalize() {
  std::sort(links.begin(), links.end());
  links.erase(std::unique(links.begin(), links.end()), links.end());
}

void MLN::add_layer(LayerGraph g) {
  if (layers_.contains(g.id())) throw Error(ErrorKind::DuplicateLayer, "layer " + g.id());
  for (NodeId n : g.nodes()) {
    if (auto it = owner_.find(n); it != owner_.end()) {
      throw Error(ErrorKind::NodeIdCollision, "node " + std::to_string(n.value) + " of layer " +
                                                  g.id() + " already belongs to layer " + it->second);
    }
  }
  for (NodeId n : g.nodes()) owner_.emplace(n, g.id());
  LayerId id = g.id();
  layers_.emplace(std::move(id), std::move(g));
}

void MLN::add_interlayer(InterLayerEdges x) {
  if (x.from_layer == x.to_layer) {
    throw Error(ErrorKind::MalformedGraph, "inter-layer edge set must join two distinct layers");
  }
  for (const auto* l : {&x.from_layer, &x.to_layer}) {
    if (!layers_.contains(*l)) throw Error(ErrorKind::UnknownLayer, "layer " + *l);
  }
  if (interlayer_.contains(key(x.from_layer, x.to_layer))) {
    throw Error(ErrorKind::DuplicatePair, x.from_layer + "," + x.to_layer);
  }
  const auto& from = layers_.at(x.from_layer);
  const auto& to = layers_.at(x.to_layer);
  for (const auto& [a, b] : x.links) {
    if (!from.contains(a)) {
      throw Error(ErrorKind::EndpointNotInLayer,
                  "node " + std::to_string(a.value) + " is not in layer " + x.from_layer);
    }
    if (!to.contains(b)) {
      throw Error(ErrorKind::EndpointNotInLayer,
                  "node " + std::to_string(b.value) + " is not in layer " + x.to_layer);
    }
  }
  x.normalize();
  auto k = key(x.from_layer, x.to_layer);
  interlayer_.emplace(std::move(k), std::move(x));
}

const LayerGraph& MLN::layer(const LayerId& id) const {
  auto it = layers_.find(id);
  if (it == layers_.end()) throw Error(ErrorKind::UnknownLayer, "layer " + id);
  return it->second;
}

bool MLN::has_interlayer(const LayerId& a, const LayerId& b) const {
  return a != b && interlayer_.contains(key(a, b));
}

std::pair<const InterLayerEdges*, bool> MLN::find_interlayer(const LayerId& a, const LayerId& b) const {
  if (a == b) return {nullptr, false};
  auto it = interlayer_.find(key(a, b));
  if (it == interlayer_.end()) return {nullptr, false};
  return {&it->second, it->second.from_layer != a};
}

std::optional<InterLayerEdges> MLN::interlayer(const LayerId& a, const LayerId& b) const {
  auto [x, reversed] = find_interlayer(a, b);
  if (!x) return std::nullopt;
  return reversed ? x->reversed() : *x;
}

std::vector<const InterLayerEdges*> MLN::interlayers() const {
  std::vector<const InterLayerEdges*> out;
  for (const auto& [k, x] : interlayer_) out.push_back(&x);
  return out;
}

std::optional<LayerId> MLN::layer_of(NodeId n) const {
  auto it = owner_.find(n);
  if (it == owner_.end()) return std::nullopt;
  return it->second;
}

bool operator==(const MLN& a, const MLN& b) {
  if (a.layers_ != b.layers_ || a.interlayer_.size() != b.interlayer_.size()) return false;
  for (const auto& [k, x] : a.interlayer_) {
    auto it = b.interlayer_.find(k);
    if (it == b.interlayer_.end()) return false;
    const auto& y = it->second;
    if (x.from_layer == y.from_layer ? x != y : x != y.reversed()) return false;
  }
  return true;
}

}  // namespace kcomm
