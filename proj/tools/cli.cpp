#include "kcomm/cli.hpp"

#include <charconv>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "kcomm/community.hpp"
#include "kcomm/engine.hpp"
#include "kcomm/error.hpp"
#include "kcomm/imdb.hpp"
#include "kcomm/io.hpp"
#include "kcomm/kspec.hpp"

namespace kcomm {
namespace {

constexpr int kUsage = 1;
constexpr int kDataError = 2;

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  return out;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void report(std::ostream& err, const Warnings& warnings) {
  for (const auto& w : warnings) err << "warning: " << w << '\n';
}

Metric metric_option(const std::string& s) {
  auto m = parse_metric(s);
  if (!m) throw CLI::ValidationError("--metric", "must be e, d or h");
  return *m;
}

// Memberships come from membership_<ID>.tsv when present, otherwise from detection.
LayerCommunities communities_for(const LayerGraph& g, const RunConfig& config, double& detection_seconds,
                                 std::ostream& err) {
  for (const auto& dir : {config.membership_dir, config.mln_dir}) {
    if (dir.empty()) continue;
    const auto path = fs::path(dir) / membership_file_name(g.id());
    if (fs::exists(path)) return make_layer_communities(g, load_membership_file(path, g), config.hub_quantile);
  }
  const auto started = std::chrono::steady_clock::now();
  auto m = detect_communities(g, config.seed);
  detection_seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  err << "detected " << m.community_count() << " communities in layer " << g.id() << '\n';
  return make_layer_communities(g, std::move(m), config.hub_quantile);
}

void apply_seed_env(RunConfig& config) {
  if (const char* env = std::getenv("MLN_SEED"); env && *env) {
    std::string_view s(env);
    std::uint64_t v{};
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) throw Error(ErrorKind::ParseError, "MLN_SEED is not an integer");
    config.seed = v;
  }
}

int cmd_detect(const std::string& layer_path, std::uint64_t seed, bool seed_given, const std::string& out_path,
               std::ostream& out, std::ostream& err) {
  RunConfig config;
  if (seed_given) config.seed = seed;
  apply_seed_env(config);
  Warnings warnings;
  auto g = load_layer(layer_path, &warnings);
  report(err, warnings);
  auto m = detect_communities(g, config.seed);
  auto file = open_out(out_path);
  write_membership(file, m);
  out << "layer " << g.id() << ": " << m.community_count() << " communities, modularity "
      << format_double(modularity(g, m)) << '\n';
  return 0;
}

void run_spec(const MLN& mln, const KSpec& spec, const RunConfig& config, const fs::path& out_dir,
              std::ostream& out, std::ostream& err) {
  CommunityTable table;
  double detection_seconds = 0.0;
  for (const auto& layer : spec.layer_order()) {
    table.emplace(layer, communities_for(mln.layer(layer), config, detection_seconds, err));
  }
  auto result = detect_k_community(mln, table, spec, config.default_metric);

  fs::create_directories(out_dir);
  {
    auto f = open_out(out_dir / "spec.txt");
    f << render_spec(spec) << '\n';
  }
  {
    auto f = open_out(out_dir / "result.txt");
    write_tuple_text(f, result);
  }
  {
    auto f = open_out(out_dir / "result.jsonl");
    write_jsonl(f, result);
  }
  {
    auto f = open_out(out_dir / "diagnostics.tsv");
    write_diagnostics(f, result);
  }
  {
    auto f = open_out(out_dir / "timing.tsv");
    write_timing(f, result, detection_seconds);
  }
  {
    auto f = open_out(out_dir / "summaries.tsv");
    write_summaries(f, result.summaries);
  }
  for (const auto& [layer, lc] : table) {
    auto f = open_out(out_dir / membership_file_name(layer));
    write_membership(f, lc.membership);
  }
  const auto [total, partial] = classify(result);
  out << render_spec(spec) << ": k=" << result.k() << ", " << result.tuples.size() << " tuples (" << total.size()
      << " total, " << partial.size() << " partial)\n";
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"k-community detection on heterogeneous multilayer networks", "kcomm"};
  app.require_subcommand(1);

  auto* detect = app.add_subcommand("detect", "detect communities of one layer");
  std::string layer_path, membership_out;
  std::uint64_t detect_seed = 42;
  detect->add_option("--layer", layer_path, "layer file")->required();
  auto* detect_seed_opt = detect->add_option("--seed", detect_seed, "random seed");
  detect->add_option("--out", membership_out, "membership output file")->required();

  auto* kcommunity = app.add_subcommand("kcommunity", "evaluate a k-community specification");
  RunConfig cli_config;
  std::string config_path, metric_text, spec_text, spec_file;
  kcommunity->add_option("--config", config_path, "key=value config file");
  auto* mln_opt = kcommunity->add_option("--mln", cli_config.mln_dir, "MLN directory");
  auto* spec_opt = kcommunity->add_option("--spec", spec_text, "specification, e.g. \"A #(A,D) D\"");
  auto* spec_file_opt = kcommunity->add_option("--spec-file", spec_file, "file with one specification per line");
  spec_opt->excludes(spec_file_opt);
  auto* metric_opt = kcommunity->add_option("--metric", metric_text, "default metric: e, d or h");
  auto* quantile_opt = kcommunity->add_option("--hub-quantile", cli_config.hub_quantile, "hub degree quantile");
  auto* seed_opt = kcommunity->add_option("--seed", cli_config.seed, "random seed for detection");
  auto* membership_opt = kcommunity->add_option("--membership-dir", cli_config.membership_dir,
                                                "directory with membership_<ID>.tsv files");
  auto* out_opt = kcommunity->add_option("--out", cli_config.out_dir, "output directory");

  auto* cbg = app.add_subcommand("cbg", "export the community bipartite graph of a layer pair");
  RunConfig cbg_config;
  std::string pair_text, cbg_metric = "e", cbg_out;
  cbg->add_option("--mln", cbg_config.mln_dir, "MLN directory")->required();
  cbg->add_option("--pair", pair_text, "L1,L2")->required();
  cbg->add_option("--metric", cbg_metric, "e, d or h");
  cbg->add_option("--hub-quantile", cbg_config.hub_quantile, "hub degree quantile");
  cbg->add_option("--seed", cbg_config.seed, "random seed for detection");
  cbg->add_option("--membership-dir", cbg_config.membership_dir, "directory with membership_<ID>.tsv files");
  cbg->add_option("--out", cbg_out, "output file (default stdout)");

  auto* rank_cmd = app.add_subcommand("rank", "rank the tuples of a result");
  std::string result_path, key_text, summaries_path;
  rank_cmd->add_option("--result", result_path, "result.jsonl")->required();
  rank_cmd->add_option("--key", key_text, "min_size, sum_size, min_density or sum_raw_pairs")->required();
  rank_cmd->add_option("--summaries", summaries_path, "summaries.tsv (default: next to the result)");

  auto* ingest = app.add_subcommand("ingest-imdb", "build an MLN from IMDb-style TSV files");
  std::string movies_path, people_path, acts_path, directs_path, ingest_out, overlap_text = "min";
  double genre_threshold = 0.5;
  ingest->add_option("--movies", movies_path, "movies TSV")->required();
  ingest->add_option("--people", people_path, "people TSV")->required();
  ingest->add_option("--acts", acts_path, "acts-in TSV")->required();
  ingest->add_option("--directs", directs_path, "directs TSV")->required();
  ingest->add_option("--out", ingest_out, "output MLN directory")->required();
  ingest->add_option("--genre-threshold", genre_threshold, "minimum genre overlap");
  ingest->add_option("--overlap", overlap_text, "min or jaccard")->check(CLI::IsMember({"min", "jaccard"}));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    err << app.help();
    return kUsage;
  }

  try {
    if (detect->parsed()) {
      return cmd_detect(layer_path, detect_seed, detect_seed_opt->count() > 0, membership_out, out, err);
    }

    if (kcommunity->parsed()) {
      RunConfig config;
      if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw Error(ErrorKind::IoError, "cannot open " + config_path);
        apply_config(in, config);
      }
      if (mln_opt->count()) config.mln_dir = cli_config.mln_dir;
      if (quantile_opt->count()) config.hub_quantile = cli_config.hub_quantile;
      if (seed_opt->count()) config.seed = cli_config.seed;
      if (membership_opt->count()) config.membership_dir = cli_config.membership_dir;
      if (out_opt->count()) config.out_dir = cli_config.out_dir;
      if (spec_opt->count()) {
        config.spec_text = spec_text;
        config.spec_file.clear();
      }
      if (spec_file_opt->count()) {
        config.spec_file = spec_file;
        config.spec_text.clear();
      }
      if (metric_opt->count()) config.default_metric = metric_option(metric_text);
      apply_seed_env(config);
      check_config(config);
      if (config.mln_dir.empty() || config.out_dir.empty() || (config.spec_text.empty() && config.spec_file.empty())) {
        err << "kcommunity needs --mln, --out and one of --spec / --spec-file\n" << kcommunity->help();
        return kUsage;
      }

      std::vector<KSpec> specs;
      if (!config.spec_file.empty()) {
        specs = parse_spec_lines(read_file(config.spec_file));
        if (specs.empty()) throw Error(ErrorKind::EmptySpec, config.spec_file + " holds no specification");
      } else {
        specs.push_back(parse_spec(config.spec_text));
      }
      Warnings warnings;
      const auto mln = load_mln_dir(config.mln_dir, &warnings);
      report(err, warnings);
      for (auto& s : specs) s = validate_spec(std::move(s), mln);
      for (std::size_t i = 0; i < specs.size(); ++i) {
        const fs::path dir = specs.size() == 1 ? fs::path(config.out_dir)
                                               : fs::path(config.out_dir) / ("spec_" + std::to_string(i + 1));
        run_spec(mln, specs[i], config, dir, out, err);
      }
      return 0;
    }

    if (cbg->parsed()) {
      auto comma = pair_text.find(',');
      if (comma == std::string::npos) {
        err << "--pair expects L1,L2\n";
        return kUsage;
      }
      const LayerId left = pair_text.substr(0, comma), right = pair_text.substr(comma + 1);
      const auto metric = metric_option(cbg_metric);
      apply_seed_env(cbg_config);
      check_config(cbg_config);
      Warnings warnings;
      const auto mln = load_mln_dir(cbg_config.mln_dir, &warnings);
      report(err, warnings);
      KSpec spec{left, {{left, right, metric, false}}};
      spec = validate_spec(spec, mln);
      CommunityTable table;
      double detection_seconds = 0.0;
      for (const auto& layer : {left, right}) {
        table.emplace(layer, communities_for(mln.layer(layer), cbg_config, detection_seconds, err));
      }
      auto [u_left, u_right] = select_u(mln, spec.steps[0], {}, {}, table);
      auto graph = build_cbg(mln, left, right, u_left, u_right, table.at(left), table.at(right), metric);
      if (cbg_out.empty()) {
        write_cbg(out, graph);
      } else {
        auto f = open_out(cbg_out);
        write_cbg(f, graph);
      }
      return 0;
    }

    if (rank_cmd->parsed()) {
      const auto key = parse_rank_key(key_text);
      std::ifstream in(result_path);
      if (!in) throw Error(ErrorKind::IoError, "cannot open " + result_path);
      auto result = read_jsonl(in);
      const fs::path sp = summaries_path.empty() ? fs::path(result_path).parent_path() / "summaries.tsv"
                                                 : fs::path(summaries_path);
      std::ifstream sin(sp);
      if (!sin) throw Error(ErrorKind::IoError, "cannot open " + sp.string());
      result.summaries = read_summaries(sin);
      for (const auto& t : rank(result, key)) out << tuple_text(t, result.layers, result.spec.steps) << '\n';
      return 0;
    }

    if (ingest->parsed()) {
      const auto records = load_imdb_records(movies_path, people_path, acts_path, directs_path);
      const auto mode = overlap_text == "jaccard" ? GenreOverlap::Jaccard : GenreOverlap::MinDenominator;
      const auto mln = ingest_imdb(records, genre_threshold, mode);
      save_mln_dir(mln, ingest_out);
      for (const auto& [id, g] : mln.layers()) {
        out << "layer " << id << ": " << g.node_count() << " nodes, " << g.edge_count() << " edges\n";
      }
      for (const auto* x : mln.interlayers()) {
        out << "interlayer " << x->from_layer << "," << x->to_layer << ": " << x->links.size() << " links\n";
      }
      return 0;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  }
  return kUsage;
}

}  // namespace kcomm
