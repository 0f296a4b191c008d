#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kcomm/cbg.hpp"
#include "kcomm/mln.hpp"

namespace kcomm {

/// One Θ_{left,right} operator of a specification.
struct Composition {
  LayerId left;
  LayerId right;
  std::optional<Metric> metric;  // nullopt: run-level default
  bool revisit = false;          // right layer already processed (case ii)

  friend bool operator==(const Composition&, const Composition&) = default;
};

/// Serial k-community specification, evaluated left to right.
struct KSpec {
  LayerId first_layer;
  std::vector<Composition> steps;

  /// Distinct layers in first-visit order; this is also the tuple slot order.
  std::vector<LayerId> layer_order() const;
  std::size_t k() const { return layer_order().size(); }
  std::size_t cycle_steps() const;

  friend bool operator==(const KSpec&, const KSpec&) = default;
};

/// Grammar (whitespace between tokens is free):
///   spec  := group (theta LAYER)+
///   group := LAYER | '(' group (theta LAYER)* ')'
///   theta := '#' [ '(' LAYER ',' LAYER ')' ] [ ':' ('e'|'d'|'h') ]
/// A bare '#' composes the layer written immediately before it with the next
/// one. With a subscript, the right layer must equal the next layer token and
/// the left layer must already be processed.
/// Throws EmptySpec, SyntaxError, SubscriptMismatch, NonSerialSpec.
KSpec parse_spec(std::string_view text);

/// One spec per non-empty line; ';' starts a comment.
std::vector<KSpec> parse_spec_lines(std::string_view text);

/// Checks layers and inter-layer edge sets against the MLN and recomputes the
/// case annotation. A layer absent from the MLN is reported as
/// MissingInterLayerEdges for the step naming it.
/// Throws MissingInterLayerEdges, DisconnectedSpec, SubscriptMismatch.
KSpec validate_spec(KSpec spec, const MLN& mln);

/// Canonical ASCII form, e.g. "A #(A,D) D #(D,M):h M".
std::string render_spec(const KSpec& spec);
/// Report form, e.g. "A Θ_{A,D} D Θ_{D,M} M".
std::string render_spec_unicode(const KSpec& spec);

}  // namespace kcomm
