#include "kcomm/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "kcomm/error.hpp"

namespace kcomm {
namespace {

using ordered_json = nlohmann::ordered_json;

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto tab = line.find('\t', start);
    out.push_back(line.substr(start, tab == std::string_view::npos ? std::string_view::npos : tab - start));
    if (tab == std::string_view::npos) return out;
    start = tab + 1;
  }
}

// Reads logical lines, stripping comments, CR and surrounding blanks.
class LineReader {
 public:
  LineReader(std::istream& in, char comment) : in_(in), comment_(comment) {}

  bool next(std::string& line) {
    while (std::getline(in_, line)) {
      ++number_;
      if (auto c = line.find(comment_); c != std::string::npos) line.erase(c);
      while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) line.pop_back();
      if (!line.empty()) return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorKind::ParseError, "line " + std::to_string(number_) + ": " + what);
  }

  std::size_t number() const { return number_; }

 private:
  std::istream& in_;
  char comment_;
  std::size_t number_ = 0;
};

template <typename T>
T parse_number(std::string_view s, const LineReader& r, const char* what) {
  T v{};
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) r.fail(std::string("invalid ") + what + " '" + std::string(s) + "'");
  return v;
}

NodeId parse_node(std::string_view s, const LineReader& r) { return NodeId(parse_number<std::uint32_t>(s, r, "node id")); }

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  return in;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  return out;
}

template <typename F>
auto with_path(const fs::path& path, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ParseError) throw Error(ErrorKind::ParseError, path.string() + ": " + e.what());
    throw;
  }
}

std::string header_of(const fs::path& path) {
  auto in = open_in(path);
  LineReader r(in, ';');
  std::string line;
  if (!r.next(line)) return {};
  return std::string(split_tabs(line).front());
}

std::string x_name(const Composition& c) { return "x_{" + c.left + "," + c.right + "}"; }

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

LayerGraph read_layer(std::istream& in, Warnings* warnings) {
  LineReader r(in, ';');
  std::string line;
  if (!r.next(line)) throw Error(ErrorKind::ParseError, "empty layer file");
  auto head = split_tabs(line);
  if (head.size() != 2 || head[0] != "layer" || head[1].empty()) r.fail("expected header 'layer<TAB>ID'");
  LayerId id(head[1]);

  std::vector<NodeId> nodes;
  std::set<NodeId> declared;
  std::map<NodeId, std::string> labels;
  std::vector<NodePair> edges;
  while (r.next(line)) {
    auto f = split_tabs(line);
    if (f[0] == "edge") {
      if (f.size() != 3) r.fail("expected 'edge<TAB>u<TAB>v'");
      NodeId u = parse_node(f[1], r), v = parse_node(f[2], r);
      if (!declared.contains(u) || !declared.contains(v)) r.fail("edge references an undeclared node");
      if (u == v) r.fail("self-loop");
      edges.emplace_back(u, v);
      continue;
    }
    if (f.size() > 2) r.fail("expected 'node[<TAB>label]'");
    NodeId n = parse_node(f[0], r);
    if (!declared.insert(n).second) r.fail("node " + std::to_string(n.value) + " declared twice");
    nodes.push_back(n);
    if (f.size() == 2 && !f[1].empty()) labels.emplace(n, std::string(f[1]));
  }
  LayerGraph g(id, std::move(nodes), edges, std::move(labels));
  if (warnings && g.duplicate_edges_dropped() > 0) {
    warnings->push_back("layer " + id + ": " + std::to_string(g.duplicate_edges_dropped()) +
                        " duplicate edge(s) ignored");
  }
  return g;
}

LayerGraph load_layer(const fs::path& path, Warnings* warnings) {
  auto in = open_in(path);
  return with_path(path, [&] { return read_layer(in, warnings); });
}

void write_layer(std::ostream& out, const LayerGraph& g) {
  out << "layer\t" << g.id() << '\n';
  for (auto n : g.nodes()) {
    out << n.value;
    if (auto it = g.labels().find(n); it != g.labels().end()) out << '\t' << it->second;
    out << '\n';
  }
  for (const auto& [u, v] : g.edges()) out << "edge\t" << u.value << '\t' << v.value << '\n';
}

InterLayerEdges read_interlayer(std::istream& in, Warnings* warnings) {
  LineReader r(in, ';');
  std::string line;
  if (!r.next(line)) throw Error(ErrorKind::ParseError, "empty inter-layer file");
  auto head = split_tabs(line);
  if (head.size() != 3 || head[0] != "interlayer" || head[1].empty() || head[2].empty()) {
    r.fail("expected header 'interlayer<TAB>L1<TAB>L2'");
  }
  InterLayerEdges x{LayerId(head[1]), LayerId(head[2]), {}};
  while (r.next(line)) {
    auto f = split_tabs(line);
    if (f.size() != 2) r.fail("expected 'u<TAB>v'");
    x.links.emplace_back(parse_node(f[0], r), parse_node(f[1], r));
  }
  const auto before = x.links.size();
  x.normalize();
  if (warnings && x.links.size() != before) {
    warnings->push_back("interlayer " + x.from_layer + "," + x.to_layer + ": " +
                        std::to_string(before - x.links.size()) + " duplicate link(s) ignored");
  }
  return x;
}

InterLayerEdges load_interlayer(const fs::path& path, Warnings* warnings) {
  auto in = open_in(path);
  return with_path(path, [&] { return read_interlayer(in, warnings); });
}

void write_interlayer(std::ostream& out, const InterLayerEdges& x) {
  out << "interlayer\t" << x.from_layer << '\t' << x.to_layer << '\n';
  for (const auto& [a, b] : x.links) out << a.value << '\t' << b.value << '\n';
}

MLN load_mln_dir(const fs::path& dir, Warnings* warnings) {
  if (!fs::is_directory(dir)) throw Error(ErrorKind::IoError, "not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const auto name = entry.path().filename().string();
    if (entry.is_regular_file() && entry.path().extension() == ".tsv" &&
        (name.starts_with("layer_") || name.starts_with("interlayer_"))) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());

  MLN mln;
  std::vector<fs::path> interlayer_files;
  for (const auto& f : files) {
    const auto header = header_of(f);
    if (header == "layer") {
      mln.add_layer(load_layer(f, warnings));
    } else if (header == "interlayer") {
      interlayer_files.push_back(f);
    } else {
      throw Error(ErrorKind::ParseError, f.string() + ": unknown header '" + header + "'");
    }
  }
  if (mln.layers().empty()) throw Error(ErrorKind::EmptyInput, "no layer files in " + dir.string());
  for (const auto& f : interlayer_files) mln.add_interlayer(load_interlayer(f, warnings));
  return mln;
}

void save_mln_dir(const MLN& mln, const fs::path& dir) {
  fs::create_directories(dir);
  for (const auto& [id, g] : mln.layers()) {
    auto out = open_out(dir / ("layer_" + id + ".tsv"));
    write_layer(out, g);
  }
  for (const auto* x : mln.interlayers()) {
    auto out = open_out(dir / ("interlayer_" + x->from_layer + "_" + x->to_layer + ".tsv"));
    write_interlayer(out, *x);
  }
}

Membership read_membership(std::istream& in, const LayerGraph& g) {
  LineReader r(in, '#');
  std::string line;
  std::vector<std::pair<NodeId, std::int64_t>> rows;
  while (r.next(line)) {
    auto f = split_tabs(line);
    if (f.size() != 2) r.fail("expected 'node<TAB>community'");
    rows.emplace_back(parse_node(f[0], r), parse_number<std::int64_t>(f[1], r, "community"));
  }
  return load_membership(g, rows);
}

Membership load_membership_file(const fs::path& path, const LayerGraph& g) {
  auto in = open_in(path);
  return with_path(path, [&] { return read_membership(in, g); });
}

void write_membership(std::ostream& out, const Membership& m) {
  out << "# layer " << m.layer() << '\n';
  const auto nodes = m.nodes();
  for (std::uint32_t i = 0; i < nodes.size(); ++i) out << nodes[i].value << '\t' << m.community_at(i) << '\n';
}

fs::path membership_file_name(const LayerId& layer) { return "membership_" + layer + ".tsv"; }

std::string tuple_text(const KTuple& t, const std::vector<LayerId>& layers, const std::vector<Composition>& steps) {
  std::string s = "< ";
  for (std::size_t i = 0; i < t.community_slots.size(); ++i) {
    if (i) s += ", ";
    s += t.community_slots[i] == 0 ? "0" : "c_" + layers[i] + "^" + std::to_string(t.community_slots[i]);
  }
  s += " ; ";
  for (std::size_t i = 0; i < t.x_slots.size(); ++i) {
    if (i) s += ", ";
    s += t.x_slots[i] ? x_name(steps[i]) : "phi";
  }
  return s + " >";
}

void write_tuple_text(std::ostream& out, const KCommunityResult& result) {
  for (const auto& t : result.tuples) out << tuple_text(t, result.layers, result.spec.steps) << '\n';
}

void write_jsonl(std::ostream& out, const KCommunityResult& result) {
  for (const auto& t : result.tuples) {
    ordered_json rec;
    rec["slots"] = ordered_json::array();
    for (std::size_t i = 0; i < t.community_slots.size(); ++i) {
      rec["slots"].push_back({{"layer", result.layers[i]}, {"community", t.community_slots[i]}});
    }
    rec["x"] = ordered_json::array();
    for (std::size_t i = 0; i < t.x_slots.size(); ++i) {
      if (!t.x_slots[i]) {
        rec["x"].push_back(nullptr);
        continue;
      }
      ordered_json pairs = ordered_json::array();
      for (const auto& [a, b] : t.x_slots[i]->pairs) pairs.push_back({a.value, b.value});
      const auto& step = result.spec.steps[i];
      rec["x"].push_back({{"step", {step.left, step.right}}, {"pairs", std::move(pairs)}});
    }
    rec["total"] = t.total();
    out << rec.dump() << '\n';
  }
}

KCommunityResult read_jsonl(std::istream& in) {
  KCommunityResult result;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      auto rec = nlohmann::json::parse(line);
      KTuple t;
      std::vector<LayerId> layers;
      for (const auto& slot : rec.at("slots")) {
        layers.push_back(slot.at("layer").get<std::string>());
        t.community_slots.push_back(slot.at("community").get<std::uint32_t>());
      }
      if (result.tuples.empty()) {
        result.layers = layers;
      } else if (layers != result.layers) {
        throw Error(ErrorKind::ParseError, "slot layers differ from the first record");
      }
      std::vector<Composition> steps;
      for (const auto& x : rec.at("x")) {
        if (x.is_null()) {
          t.x_slots.push_back(std::nullopt);
          steps.push_back({});
          continue;
        }
        Composition c{x.at("step").at(0).get<std::string>(), x.at("step").at(1).get<std::string>(), {}, false};
        auto slot = [&](const LayerId& l) -> std::uint32_t {
          auto it = std::find(layers.begin(), layers.end(), l);
          if (it == layers.end()) throw Error(ErrorKind::ParseError, "step layer " + l + " has no slot");
          return t.community_slots[static_cast<std::size_t>(it - layers.begin())];
        };
        ExpandedEdgeSet e{{c.left, slot(c.left)}, {c.right, slot(c.right)}, {}};
        for (const auto& p : x.at("pairs")) {
          e.pairs.emplace_back(NodeId(p.at(0).get<std::uint32_t>()), NodeId(p.at(1).get<std::uint32_t>()));
        }
        t.x_slots.push_back(std::move(e));
        steps.push_back(std::move(c));
      }
      // keep the step names of the first record that carries them
      if (result.spec.steps.size() < steps.size()) result.spec.steps.resize(steps.size());
      for (std::size_t i = 0; i < steps.size(); ++i) {
        if (result.spec.steps[i].left.empty()) result.spec.steps[i] = steps[i];
      }
      result.tuples.push_back(std::move(t));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::ParseError, "line " + std::to_string(number) + ": " + e.what());
    } catch (const Error& e) {
      throw Error(ErrorKind::ParseError, "line " + std::to_string(number) + ": " + e.what());
    }
  }
  if (!result.layers.empty()) result.spec.first_layer = result.layers.front();
  return result;
}

void write_diagnostics(std::ostream& out, const KCommunityResult& result) {
  out << "step\tleft\tright\tmetric\tcase\tu_left\tu_right\tcbg_edges\tcbg_dropped\tmatched\ttotal_weight"
         "\tconsistent\tno_match\tinconsistent\tconverged\n";
  for (std::size_t i = 0; i < result.steps.size(); ++i) {
    const auto& d = result.steps[i];
    out << i + 1 << '\t' << d.step.left << '\t' << d.step.right << '\t' << metric_char(d.metric) << '\t'
        << (i == 0 ? "base" : d.step.revisit ? "ii" : "i") << '\t' << d.u_left.size() << '\t' << d.u_right.size()
        << '\t' << d.cbg_edges << '\t' << d.cbg_dropped << '\t' << d.matched.pairs.size() << '\t'
        << format_double(d.matched.total_weight) << '\t' << d.consistent << '\t' << d.no_match << '\t'
        << d.inconsistent << '\t' << d.converged << '\n';
  }
}

void write_timing(std::ostream& out, const KCommunityResult& result, double detection_seconds) {
  out << "phase\tseconds\n";
  out << "detection\t" << format_double(detection_seconds) << '\n';
  for (std::size_t i = 0; i < result.steps.size(); ++i) {
    out << "step_" << i + 1 << '\t' << format_double(result.steps[i].seconds) << '\n';
  }
}

void write_summaries(std::ostream& out, const SummaryTable& summaries) {
  out << "layer\tcommunity\tnodes\tinternal_edges\tdensity\thubs\n";
  for (const auto& [layer, list] : summaries) {
    for (const auto& s : list) {
      out << layer << '\t' << s.id.index << '\t' << s.node_count << '\t' << s.internal_edge_count << '\t'
          << format_double(s.density) << '\t';
      for (std::size_t i = 0; i < s.hubs.size(); ++i) out << (i ? "," : "") << s.hubs[i].value;
      out << '\n';
    }
  }
}

SummaryTable read_summaries(std::istream& in) {
  LineReader r(in, ';');
  std::string line;
  if (!r.next(line) || !line.starts_with("layer\tcommunity")) r.fail("expected summaries header");
  SummaryTable table;
  while (r.next(line)) {
    auto f = split_tabs(line);
    if (f.size() != 6) r.fail("expected 6 columns");
    CommunitySummary s;
    s.id = {LayerId(f[0]), parse_number<std::uint32_t>(f[1], r, "community")};
    s.node_count = parse_number<std::size_t>(f[2], r, "node count");
    s.internal_edge_count = parse_number<std::size_t>(f[3], r, "edge count");
    s.density = parse_number<double>(f[4], r, "density");
    std::string_view hubs = f[5];
    while (!hubs.empty()) {
      auto comma = hubs.find(',');
      s.hubs.push_back(parse_node(hubs.substr(0, comma), r));
      hubs = comma == std::string_view::npos ? std::string_view{} : hubs.substr(comma + 1);
    }
    auto& list = table[s.id.layer];
    if (s.id.index != list.size() + 1) r.fail("communities must be listed densely from 1");
    list.push_back(std::move(s));
  }
  return table;
}

void write_cbg(std::ostream& out, const CommunityBipartiteGraph& cbg) {
  out << "left\tright\tpairs\traw_weight\tweight\tstatus\n";
  auto row = [&](const MetaEdge& e, const char* status) {
    out << "c_" << cbg.left_layer << '^' << e.left << '\t' << "c_" << cbg.right_layer << '^' << e.right << '\t'
        << e.expanded.pairs.size() << '\t' << format_double(e.raw_weight) << '\t' << format_double(e.weight) << '\t'
        << status << '\n';
  };
  for (const auto& e : cbg.edges) row(e, "kept");
  for (const auto& e : cbg.dropped) row(e, "dropped");
}

void apply_config(std::istream& in, RunConfig& config) {
  std::string line;
  std::size_t number = 0;
  auto fail = [&](const std::string& what) {
    throw Error(ErrorKind::ParseError, "config line " + std::to_string(number) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++number;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == ';' || line[first] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) fail("expected key=value");
    auto trim = [](std::string s) {
      auto b = s.find_first_not_of(" \t\r");
      auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key == "metric") {
      auto m = parse_metric(value);
      if (!m) fail("metric must be e, d or h");
      config.default_metric = *m;
    } else if (key == "seed") {
      std::uint64_t v{};
      auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
      if (ec != std::errc() || p != value.data() + value.size()) fail("invalid seed");
      config.seed = v;
    } else if (key == "hub_quantile") {
      double v{};
      auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
      if (ec != std::errc() || p != value.data() + value.size()) fail("invalid hub_quantile");
      config.hub_quantile = v;
    } else if (key == "mln") {
      config.mln_dir = value;
    } else if (key == "membership_dir") {
      config.membership_dir = value;
    } else if (key == "out") {
      config.out_dir = value;
    } else if (key == "spec") {
      config.spec_text = value;
    } else if (key == "spec_file") {
      config.spec_file = value;
    } else {
      fail("unknown key '" + key + "'");
    }
  }
}

void check_config(const RunConfig& config) {
  if (!(config.hub_quantile > 0.0 && config.hub_quantile <= 1.0)) {
    throw Error(ErrorKind::InvalidQuantile, "hub quantile must lie in (0, 1]");
  }
}

}  // namespace kcomm
