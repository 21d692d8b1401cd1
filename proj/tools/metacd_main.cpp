// metacd: synthesize hybrid human-AI networks, cluster them, and evaluate
// human-centric community quality.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "metacd/metacd.hpp"

namespace {

using namespace metacd;
namespace fs = std::filesystem;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<double> parse_double_list(const std::string& csv, std::size_t expected,
                                      const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      out.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw UsageError(what + ": cannot parse '" + tok + "'");
    }
  }
  if (expected != 0 && out.size() != expected) {
    throw UsageError(what + ": expected " + std::to_string(expected) + " comma-separated values");
  }
  return out;
}

ScoringMode parse_scoring(const std::string& name) {
  if (name == "all") return ScoringMode::All;
  if (name == "ec") return ScoringMode::EC;
  if (name == "bc") return ScoringMode::BC;
  if (name == "cc") return ScoringMode::CC;
  if (name == "ec+bc") return ScoringMode::EC_BC;
  if (name == "ec+cc") return ScoringMode::EC_CC;
  if (name == "bc+cc") return ScoringMode::BC_CC;
  throw UsageError("unknown scoring mode: " + name);
}

CoolingPolicy parse_cooling_policy(const std::string& name) {
  if (name == "every") return CoolingPolicy::EveryIteration;
  if (name == "improve") return CoolingPolicy::OnImprovementOnly;
  throw UsageError("unknown cooling policy: " + name);
}

// ---------------------------------------------------------------------------
// synth

struct SynthOptions {
  std::string input;
  std::string labels;
  int strategy = 1;
  double ai_ratio = 0.10;
  double lambda = 0.7;
  double a = 0.001;
  double r = 0.5;
  double x = 0.012;
  double y = 0.0002;
  std::uint32_t evolve_pairs = 40;
  std::uint32_t evolve_rounds = 10;
  bool no_evolve = false;
  std::uint64_t seed = 1;
  std::string out;
};

HasnGraph synthesize(const SynthOptions& opt, const LoadedNetwork& net) {
  GenStrategyConfig cfg;
  cfg.strategy = static_cast<GenStrategy>(opt.strategy);
  cfg.ai_ratio = opt.ai_ratio;
  cfg.lambda = opt.lambda;
  cfg.a = opt.a;
  cfg.r = opt.r;
  cfg.x = opt.x;
  cfg.y = opt.y;
  cfg.seed = opt.seed;

  std::optional<GroupAssignment> groups;
  if (cfg.strategy == GenStrategy::IntroExtro || cfg.strategy == GenStrategy::DualPersonality) {
    if (net.has_labels) {
      groups = net.groups;
    } else {
      const Partition human_partition =
          louvain(net.graph, ObjectiveKind::q(), derive_substream(opt.seed, "groups"));
      groups = group_assignment_from_partition(net.graph, human_partition);
    }
  }
  HasnGraph hasn = insert_ai(net.graph, cfg, groups ? &*groups : nullptr);
  if (!opt.no_evolve) {
    hasn = evolve_jaccard(hasn, EvolutionConfig{opt.evolve_pairs, opt.evolve_rounds});
  }
  return hasn;
}

int run_synth(const SynthOptions& opt) {
  if (opt.strategy < 1 || opt.strategy > 4) throw UsageError("--strategy must be 1..4");
  const LoadedNetwork net = load_edge_list(opt.input, opt.labels);
  if (net.dropped_duplicates + net.dropped_self_loops > 0) {
    std::cerr << "warning: dropped " << net.dropped_duplicates << " duplicate edge(s) and "
              << net.dropped_self_loops << " self-loop(s)\n";
  }
  const HasnGraph hasn = synthesize(opt, net);
  save_hasn(hasn, opt.out);

  RunManifest manifest;
  manifest.command = "synth";
  manifest.seed = opt.seed;
  manifest.config = {{"strategy", opt.strategy},
                     {"ai_ratio", opt.ai_ratio},
                     {"lambda", opt.lambda},
                     {"a", opt.a},
                     {"r", opt.r},
                     {"x", opt.x},
                     {"y", opt.y},
                     {"evolve", !opt.no_evolve},
                     {"evolve_pairs", opt.evolve_pairs},
                     {"evolve_rounds", opt.evolve_rounds},
                     {"labels", !opt.labels.empty()}};
  manifest.input_digests[opt.input] = digest_file(opt.input);
  if (!opt.labels.empty()) manifest.input_digests[opt.labels] = digest_file(opt.labels);
  manifest.save(opt.out + ".manifest.json");

  std::cout << "synth: " << hasn.node_count() << " nodes (" << hasn.human_count() << " human, "
            << hasn.ai_count() << " AI), " << hasn.edge_count() << " edges -> " << opt.out
            << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// cluster

struct ClusterOptions {
  std::string input;
  std::string method = "cusa";
  std::string scoring = "all";
  std::string weights = "3,2,1";
  double alpha = 1.0;
  double beta = 1.0;
  double gamma = 1.0;
  double t_initial = 1.0;
  double t_min = 1e-3;
  double cooling = 0.98;
  std::string cooling_policy = "every";
  std::uint64_t seed = 1;
  std::string out;
  std::string trace;
};

struct ClusterRun {
  PartitionFile file;
  std::vector<TraceRow> trace;
};

ClusterRun run_cluster_method(const HasnGraph& g, const ClusterOptions& opt) {
  ClusterRun run;
  if (opt.method == "cusa") {
    AnnealConfig cfg;
    const std::vector<double> w = parse_double_list(opt.weights, 3, "--weights");
    cfg.weight_policy = EdgeWeightPolicy{w[0], w[1], w[2]};
    cfg.scoring_mode = parse_scoring(opt.scoring);
    cfg.objective = ObjectiveKind::hq(opt.alpha, opt.beta, opt.gamma);
    cfg.t_initial = opt.t_initial;
    cfg.t_min = opt.t_min;
    cfg.cooling_factor = opt.cooling;
    cfg.cooling_policy = parse_cooling_policy(opt.cooling_policy);
    cfg.seed = opt.seed;
    CusaResult result = cusa_run(g, cfg);
    std::vector<NodeId> retained = g.ai_nodes();
    for (NodeId r : result.removed_ais) {
      retained.erase(std::find(retained.begin(), retained.end(), r));
    }
    run.file = make_partition_file(result.graph, result.partition, "cusa", opt.seed,
                                   result.removed_ais, retained);
    run.trace = std::move(result.trace);
  } else if (opt.method == "louvain-n") {
    const Partition p = louvain(g, ObjectiveKind::q(), opt.seed);
    run.file = make_partition_file(g, p, "louvain-n", opt.seed, {}, g.ai_nodes());
  } else if (opt.method == "louvain-a") {
    HasnGraph humans = g;
    const std::vector<NodeId> ais = g.ai_nodes();
    for (NodeId v : ais) humans = humans.removed(v);
    const Partition p = louvain(humans, ObjectiveKind::q(), opt.seed);
    run.file = make_partition_file(humans, p, "louvain-a", opt.seed, ais, {});
  } else {
    throw UsageError("unknown method: " + opt.method + " (expected cusa|louvain-n|louvain-a)");
  }
  return run;
}

int run_cluster(const ClusterOptions& opt) {
  const HasnGraph g = load_hasn(opt.input);
  ClusterRun run = run_cluster_method(g, opt);
  save_partition(run.file, opt.out);
  if (!opt.trace.empty()) save_trace_csv(run.trace, opt.trace);

  RunManifest manifest;
  manifest.command = "cluster";
  manifest.seed = opt.seed;
  manifest.config = {{"method", opt.method},       {"scoring", opt.scoring},
                     {"weights", opt.weights},     {"alpha", opt.alpha},
                     {"beta", opt.beta},           {"gamma", opt.gamma},
                     {"t_initial", opt.t_initial}, {"t_min", opt.t_min},
                     {"cooling", opt.cooling},     {"cooling_policy", opt.cooling_policy}};
  manifest.input_digests[opt.input] = digest_file(opt.input);
  manifest.save(opt.out + ".manifest.json");

  std::cout << "cluster: method=" << opt.method << " communities=" << run.file.community_count
            << " retained_ai=" << run.file.retained_ai.size() << " -> " << opt.out << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// eval

struct EvalOptions {
  std::string input;
  std::string partition;
  std::string reference;
  double alpha = 1.0;
  double beta = 1.0;
  double gamma = 1.0;
  std::string out;
};

MetricReport evaluate(const HasnGraph& input, const PartitionFile& pf,
                      const PartitionFile* reference, const ObjectiveKind& obj) {
  HasnGraph g = input;
  for (NodeId v : pf.removed_ai) g = g.removed(v);
  const Partition p = pf.to_partition(g);
  std::optional<Partition> ref;
  if (reference != nullptr) {
    HasnGraph rg = input;
    for (NodeId v : reference->removed_ai) rg = rg.removed(v);
    ref = reference->to_partition(rg);
  }
  return build_report(g, p, obj, static_cast<std::uint32_t>(pf.retained_ai.size()),
                      ref ? &*ref : nullptr);
}

int run_eval(const EvalOptions& opt) {
  const HasnGraph input = load_hasn(opt.input);
  const PartitionFile pf = load_partition(opt.partition);
  std::optional<PartitionFile> ref;
  if (!opt.reference.empty()) ref = load_partition(opt.reference);
  const ObjectiveKind obj = ObjectiveKind::hq(opt.alpha, opt.beta, opt.gamma);
  const MetricReport report = evaluate(input, pf, ref ? &*ref : nullptr, obj);

  const bool csv = opt.out.size() >= 4 && opt.out.substr(opt.out.size() - 4) == ".csv";
  if (csv) {
    write_file(opt.out, report_to_csv(report));
  } else {
    write_file(opt.out, report_to_json(report).dump(2) + "\n");
  }
  std::cout << "eval: q=" << format_double(report.q) << " hq=" << format_double(report.hq);
  if (report.has_migration) {
    std::cout << " hmr=" << format_double(report.hmr)
              << " adm=" << (report.adm_infinite ? "inf" : format_double(report.adm));
  }
  std::cout << " -> " << opt.out << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepOptions {
  std::string config;
  std::uint32_t seeds = 10;
  std::string out;
};

int run_sweep(const SweepOptions& opt) {
  const nlohmann::json cfg = nlohmann::json::parse(read_file(opt.config));
  const std::string input = cfg.at("input").get<std::string>();
  const std::string labels = cfg.value("labels", std::string{});

  SynthOptions synth;
  synth.input = input;
  synth.labels = labels;
  synth.strategy = cfg.value("strategy", 1);
  synth.ai_ratio = cfg.value("ai_ratio", 0.10);
  synth.lambda = cfg.value("lambda", 0.7);
  synth.a = cfg.value("a", 0.001);
  synth.r = cfg.value("r", 0.5);
  synth.x = cfg.value("x", 0.012);
  synth.y = cfg.value("y", 0.0002);
  synth.no_evolve = !cfg.value("evolve", true);
  synth.evolve_pairs = cfg.value("evolve_pairs", 40u);
  synth.evolve_rounds = cfg.value("evolve_rounds", 10u);

  ClusterOptions cluster;
  cluster.scoring = cfg.value("scoring", std::string("all"));
  if (cfg.contains("weights")) {
    const auto w = cfg["weights"].get<std::vector<double>>();
    if (w.size() != 3) throw UsageError("sweep config: weights must hold 3 values");
    cluster.weights =
        format_double(w[0]) + "," + format_double(w[1]) + "," + format_double(w[2]);
  }
  cluster.alpha = cfg.value("alpha", 1.0);
  cluster.beta = cfg.value("beta", 1.0);
  cluster.gamma = cfg.value("gamma", 1.0);
  if (cfg.contains("anneal")) {
    const auto& a = cfg["anneal"];
    cluster.t_initial = a.value("t_initial", 1.0);
    cluster.t_min = a.value("t_min", 1e-3);
    cluster.cooling = a.value("cooling", 0.98);
    cluster.cooling_policy = a.value("cooling_policy", std::string("every"));
  }
  std::vector<std::string> methods = {"louvain-n", "louvain-a", "cusa"};
  if (cfg.contains("methods")) methods = cfg["methods"].get<std::vector<std::string>>();
  const std::uint64_t base_seed = cfg.value("base_seed", 1ull);

  const LoadedNetwork net = load_edge_list(input, labels);
  fs::create_directories(opt.out);
  fs::create_directories(opt.out + "/runs");

  std::ostringstream results;
  results << "seed,method,q,hq,hmr,adm,k_communities,retained_ai\n";
  std::map<std::string, std::vector<MetricReport>> by_method;
  const ObjectiveKind obj = ObjectiveKind::hq(cluster.alpha, cluster.beta, cluster.gamma);

  for (std::uint32_t i = 0; i < opt.seeds; ++i) {
    const std::uint64_t seed = base_seed + i;
    synth.seed = seed;
    const HasnGraph hasn = synthesize(synth, net);

    cluster.seed = seed;
    ClusterOptions ref_opt = cluster;
    ref_opt.method = "louvain-a";
    const ClusterRun reference = run_cluster_method(hasn, ref_opt);

    for (const std::string& method : methods) {
      ClusterOptions run_opt = cluster;
      run_opt.method = method;
      const ClusterRun run =
          method == "louvain-a" ? reference : run_cluster_method(hasn, run_opt);
      const std::string stem =
          opt.out + "/runs/" + method + "_seed" + std::to_string(seed);
      save_partition(run.file, stem + ".partition.json");
      if (method == "cusa") save_trace_csv(run.trace, stem + ".trace.csv");

      const MetricReport report = evaluate(hasn, run.file, &reference.file, obj);
      by_method[method].push_back(report);
      results << seed << ',' << method << ',' << format_double(report.q) << ','
              << format_double(report.hq) << ',' << format_double(report.hmr) << ','
              << (report.adm_infinite ? "inf" : format_double(report.adm)) << ','
              << report.k_communities << ',' << report.retained_ai << '\n';
    }
  }
  write_file(opt.out + "/results.csv", results.str());

  std::ostringstream summary;
  nlohmann::json summary_json;
  summary << "method,seeds,mean_q,mean_hq,mean_hmr,mean_adm\n";
  for (const auto& [method, reports] : by_method) {
    double q = 0, hq = 0, mig = 0, a = 0;
    for (const MetricReport& r : reports) {
      q += r.q;
      hq += r.hq;
      mig += r.hmr;
      a += r.adm_infinite ? 0.0 : r.adm;
    }
    const double n = static_cast<double>(reports.size());
    summary << method << ',' << reports.size() << ',' << format_double(q / n) << ','
            << format_double(hq / n) << ',' << format_double(mig / n) << ','
            << format_double(a / n) << '\n';
    summary_json[method] = {{"seeds", reports.size()},
                            {"mean_q", q / n},
                            {"mean_hq", hq / n},
                            {"mean_hmr", mig / n},
                            {"mean_adm", a / n}};
    std::cout << "sweep: " << method << " mean_q=" << format_double(q / n)
              << " mean_hq=" << format_double(hq / n) << "\n";
  }
  write_file(opt.out + "/summary.csv", summary.str());
  write_file(opt.out + "/summary.json", summary_json.dump(2) + "\n");

  RunManifest manifest;
  manifest.command = "sweep";
  manifest.seed = base_seed;
  manifest.config = cfg;
  manifest.config["seeds"] = opt.seeds;
  manifest.input_digests[input] = digest_file(input);
  if (!labels.empty()) manifest.input_digests[labels] = digest_file(labels);
  manifest.save(opt.out + "/manifest.json");
  return 0;
}

// ---------------------------------------------------------------------------
// bench

struct BenchOptions {
  std::string sizes = "10000,50000,100000,200000";
  std::string out;
};

int run_bench(const BenchOptions& opt) {
  // Fixed node count with growing edge count keeps the benchmark in the
  // |E|-dominated regime of the complexity bound; the short schedule fixes
  // the iteration count across sizes so the fit measures per-iteration cost.
  constexpr std::uint32_t kNodes = 4000;
  constexpr std::uint32_t kGroups = 40;
  constexpr double kIntra = 0.85;
  const std::vector<double> sizes = parse_double_list(opt.sizes, 0, "--sizes");
  if (sizes.empty()) throw UsageError("--sizes: need at least one edge count");

  std::ostringstream csv;
  csv << "edges,nodes,ai_nodes,iterations,seconds\n";
  for (double size : sizes) {
    const std::uint64_t edges = static_cast<std::uint64_t>(size);
    auto [graph, groups] = gen_planted_graph(kNodes, edges, kGroups, kIntra, 7);
    GenStrategyConfig gen;
    gen.strategy = GenStrategy::RandomInsertion;
    gen.ai_ratio = 0.10;
    gen.seed = 7;
    const HasnGraph hasn = insert_ai_random(graph, gen);

    AnnealConfig cfg;
    cfg.t_initial = 1.0;
    cfg.t_min = 0.05;
    cfg.cooling_factor = 0.5;
    cfg.seed = 7;
    const auto start = std::chrono::steady_clock::now();
    const CusaResult result = cusa_run(hasn, cfg);
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

    csv << edges << ',' << hasn.node_count() << ',' << hasn.ai_count() << ','
        << result.trace.size() << ',' << format_double(elapsed.count()) << '\n';
    std::cout << "bench: |E|=" << edges << " wall=" << format_double(elapsed.count()) << "s\n";
  }
  write_file(opt.out, csv.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MetaCD: human-centric community detection in hybrid human-AI networks"};
  app.require_subcommand(1);

  SynthOptions synth;
  CLI::App* s = app.add_subcommand("synth", "Turn an edge list into a synthetic HASN");
  s->add_option("--input", synth.input, "edge list file")->required();
  s->add_option("--labels", synth.labels, "optional `node class` labels file");
  s->add_option("--strategy", synth.strategy, "generation strategy 1..4")->required();
  s->add_option("--ai-ratio", synth.ai_ratio, "AI fraction of |V| (default 0.10)");
  s->add_option("--lambda", synth.lambda, "mean AI degree, strategy 1");
  s->add_option("--a", synth.a, "initial link probability, strategy 2");
  s->add_option("--r", synth.r, "decay constant, strategy 2");
  s->add_option("--x", synth.x, "intra-group link probability, strategies 3-4");
  s->add_option("--y", synth.y, "inter-group link probability, strategies 3-4");
  s->add_option("--evolve-pairs", synth.evolve_pairs, "edges added per evolution round");
  s->add_option("--evolve-rounds", synth.evolve_rounds, "evolution rounds");
  s->add_flag("--no-evolve", synth.no_evolve, "skip Jaccard evolution");
  s->add_option("--seed", synth.seed, "RNG seed")->required();
  s->add_option("--out", synth.out, "output .hasn file")->required();

  ClusterOptions cluster;
  CLI::App* c = app.add_subcommand("cluster", "Cluster an HASN");
  c->add_option("--input", cluster.input, ".hasn file")->required();
  c->add_option("--method", cluster.method, "cusa | louvain-n | louvain-a")->required();
  c->add_option("--scoring", cluster.scoring, "all|ec|bc|cc|ec+bc|ec+cc|bc+cc");
  c->add_option("--weights", cluster.weights, "hh,ha,aa edge weights (default 3,2,1)");
  c->add_option("--alpha", cluster.alpha, "HQ alpha");
  c->add_option("--beta", cluster.beta, "HQ beta");
  c->add_option("--gamma", cluster.gamma, "HQ gamma");
  c->add_option("--t-initial", cluster.t_initial, "initial temperature");
  c->add_option("--t-min", cluster.t_min, "minimum temperature");
  c->add_option("--cooling", cluster.cooling, "cooling factor in (0,1)");
  c->add_option("--cooling-policy", cluster.cooling_policy, "every | improve");
  c->add_option("--seed", cluster.seed, "RNG seed")->required();
  c->add_option("--out", cluster.out, "output partition JSON")->required();
  c->add_option("--trace", cluster.trace, "output anneal trace CSV");

  EvalOptions eval;
  CLI::App* e = app.add_subcommand("eval", "Compute Q/HQ/HMR/ADM for a partition");
  e->add_option("--input", eval.input, ".hasn file")->required();
  e->add_option("--partition", eval.partition, "partition JSON")->required();
  e->add_option("--reference", eval.reference, "reference partition JSON for HMR/ADM");
  e->add_option("--alpha", eval.alpha, "HQ alpha");
  e->add_option("--beta", eval.beta, "HQ beta");
  e->add_option("--gamma", eval.gamma, "HQ gamma");
  e->add_option("--out", eval.out, "report file (.json or .csv)")->required();

  SweepOptions sweep;
  CLI::App* w = app.add_subcommand("sweep", "Repeated seeded runs with averaged metrics");
  w->add_option("--config", sweep.config, "experiment config JSON")->required();
  w->add_option("--seeds", sweep.seeds, "number of seeds")->required();
  w->add_option("--out", sweep.out, "output directory")->required();

  BenchOptions bench;
  CLI::App* b = app.add_subcommand("bench", "CUSA wall time across graph sizes");
  b->add_option("--sizes", bench.sizes, "comma-separated edge counts");
  b->add_option("--out", bench.out, "output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& help) {
    return app.exit(help);
  } catch (const CLI::ParseError& err) {
    app.exit(err);
    return 2;
  }

  try {
    if (s->parsed()) return run_synth(synth);
    if (c->parsed()) return run_cluster(cluster);
    if (e->parsed()) return run_eval(eval);
    if (w->parsed()) return run_sweep(sweep);
    if (b->parsed()) return run_bench(bench);
    return 2;
  } catch (const UsageError& err) {
    std::cerr << "usage error: " << err.what() << "\n";
    return 2;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
}
