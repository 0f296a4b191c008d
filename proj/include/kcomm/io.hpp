#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kcomm/cbg.hpp"
#include "kcomm/community.hpp"
#include "kcomm/engine.hpp"
#include "kcomm/mln.hpp"

namespace kcomm {

namespace fs = std::filesystem;

/// Non-fatal findings collected while reading input (e.g. duplicate edges).
using Warnings = std::vector<std::string>;

// Layer file: "layer<TAB>ID", then "node[<TAB>label]" and "edge<TAB>u<TAB>v"
// lines. ';' starts a comment. Throws IoError, ParseError, InvariantViolation.
LayerGraph read_layer(std::istream& in, Warnings* warnings = nullptr);
LayerGraph load_layer(const fs::path& path, Warnings* warnings = nullptr);
void write_layer(std::ostream& out, const LayerGraph& g);

// Inter-layer file: "interlayer<TAB>L1<TAB>L2", then "u<TAB>v" lines.
InterLayerEdges read_interlayer(std::istream& in, Warnings* warnings = nullptr);
InterLayerEdges load_interlayer(const fs::path& path, Warnings* warnings = nullptr);
void write_interlayer(std::ostream& out, const InterLayerEdges& x);

/// Reads every layer_*.tsv and interlayer_*.tsv file of `dir`.
MLN load_mln_dir(const fs::path& dir, Warnings* warnings = nullptr);
/// Writes layer_<ID>.tsv and interlayer_<A>_<B>.tsv files.
void save_mln_dir(const MLN& mln, const fs::path& dir);

// Membership: "node<TAB>community" rows, '#' comments.
Membership read_membership(std::istream& in, const LayerGraph& g);
Membership load_membership_file(const fs::path& path, const LayerGraph& g);
void write_membership(std::ostream& out, const Membership& m);
fs::path membership_file_name(const LayerId& layer);

// Result files.
void write_tuple_text(std::ostream& out, const KCommunityResult& result);
std::string tuple_text(const KTuple& t, const std::vector<LayerId>& layers, const std::vector<Composition>& steps);
void write_jsonl(std::ostream& out, const KCommunityResult& result);
/// Deterministic per-step statistics (no wall time).
void write_diagnostics(std::ostream& out, const KCommunityResult& result);
void write_timing(std::ostream& out, const KCommunityResult& result, double detection_seconds);
void write_summaries(std::ostream& out, const SummaryTable& summaries);
void write_cbg(std::ostream& out, const CommunityBipartiteGraph& cbg);

/// Tuples and slot layers of a JSONL result. Throws ParseError.
KCommunityResult read_jsonl(std::istream& in);
SummaryTable read_summaries(std::istream& in);

/// Shortest round-trip decimal form.
std::string format_double(double v);

struct RunConfig {
  Metric default_metric = Metric::Edges;
  std::uint64_t seed = 42;
  double hub_quantile = kDefaultHubQuantile;
  std::string mln_dir;
  std::string membership_dir;
  std::string out_dir;
  std::string spec_text;
  std::string spec_file;
};

/// Applies "key=value" lines (keys: metric, seed, hub_quantile, mln,
/// membership_dir, out, spec, spec_file). Lines starting with ';' or '#'
/// are comments. Throws ParseError.
void apply_config(std::istream& in, RunConfig& config);
/// Throws InvalidQuantile unless 0 < hub_quantile <= 1.
void check_config(const RunConfig& config);

}  // namespace kcomm
