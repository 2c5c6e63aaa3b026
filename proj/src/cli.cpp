#include "ssm/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include "ssm/algorithms.hpp"
#include "ssm/graph_io.hpp"
#include "ssm/instances.hpp"
#include "ssm/random.hpp"
#include "ssm/rs.hpp"

namespace ssm {

double parse_probability(const std::string& text) {
  if (text == "sqrt2-1") return std::sqrt(2.0) - 1.0;
  double value = 0.0;
  std::size_t used = 0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a probability: '" + text + "'");
  }
  if (used != text.size()) throw std::invalid_argument("not a probability: '" + text + "'");
  return value;
}

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CertificationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

// A graph to run on: materialised (file, planted) or streamed (hard instance).
struct Workload {
  std::optional<BipartiteGraph> graph;
  std::optional<HardInstance> hard;
  std::optional<std::uint64_t> known_mu;

  std::shared_ptr<const EdgeSource> source() const {
    if (hard) return hard->source();
    return std::make_shared<GraphSource>(*graph);
  }
};

MetaParams make_params(const std::string& p_text, std::uint32_t d, std::uint64_t seed) {
  MetaParams params;
  try {
    params.p = parse_probability(p_text);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  params.d = d;
  params.seed = seed;
  try {
    params.validate();
  } catch (const std::domain_error& e) {
    throw UsageError(e.what());
  }
  return params;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

// --- run --------------------------------------------------------------------

struct RunOptions {
  std::string input;
  std::uint32_t hard_n = 0;
  Vertex planted_n = 0;
  double density = 0.0;
  std::uint32_t d = 1;
  std::string p = "sqrt2-1";
  std::uint64_t seed = 0;
  bool no_oracle = false;
  std::optional<std::uint64_t> mu;
  std::string format = "text";
};

const char* const kReportColumns =
    "d,p,seed,predicted,realized,first_pass,sampled,left_wings,right_wings,candidates,"
    "augmentations,final,mu,epsilon,peak_space,passes";

int cmd_run(const RunOptions& o, std::ostream& out) {
  const MetaParams params = make_params(o.p, o.d, o.seed);
  const int sources = !o.input.empty() + (o.hard_n > 0) + (o.planted_n > 0);
  if (sources != 1) throw UsageError("give exactly one of --input, --hard, --planted");

  Workload w;
  if (!o.input.empty()) {
    w.graph = read_graph_file(o.input);
  } else if (o.hard_n > 0) {
    w.hard = gen_hard_instance(o.hard_n);
    w.known_mu = w.hard->mu();
  } else {
    auto inst = gen_random_planted(o.planted_n, o.density, o.seed);
    w.graph = std::move(inst.graph);
    w.known_mu = o.planted_n;
  }
  std::optional<std::uint64_t> mu = o.mu ? o.mu : w.known_mu;
  if (!mu && !o.no_oracle && w.graph) mu = maximum_matching(*w.graph).size();

  auto stream = open_stream(w.source());
  const auto result = two_pass(stream, params, mu);
  const auto& r = result.report;
  const double predicted = predicted_factor(params.p, params.d);

  if (o.format == "csv") {
    out << kReportColumns << '\n';
    out << params.d << ',' << num(params.p) << ',' << params.seed << ',' << num(predicted) << ','
        << (r.mu ? num(r.ratio()) : "") << ',' << r.first_pass_size << ',' << r.sampled_size
        << ',' << r.left_wings << ',' << r.right_wings << ',' << r.candidates << ','
        << r.augmentations << ',' << r.final_size << ',' << (r.mu ? std::to_string(*r.mu) : "")
        << ',' << (r.mu ? num(r.epsilon()) : "") << ',' << r.peak_space << ',' << r.passes
        << '\n';
    return kExitOk;
  }
  out << "vertices      " << stream.n_a() << " + " << stream.n_b() << '\n';
  out << "edges         " << stream.edge_count() << '\n';
  out << "d             " << params.d << '\n';
  out << "p             " << num(params.p) << '\n';
  out << "seed          " << params.seed << '\n';
  out << "first_pass    " << r.first_pass_size << '\n';
  out << "sampled       " << r.sampled_size << '\n';
  out << "left_wings    " << r.left_wings << '\n';
  out << "right_wings   " << r.right_wings << '\n';
  out << "candidates    " << r.candidates << '\n';
  out << "augmentations " << r.augmentations << '\n';
  out << "final         " << r.final_size << '\n';
  if (r.mu) {
    out << "mu            " << *r.mu << '\n';
    out << "epsilon       " << num(r.epsilon()) << '\n';
    out << "realized      " << num(r.ratio()) << '\n';
  }
  out << "predicted     " << num(predicted) << '\n';
  out << "peak_space    " << r.peak_space << '\n';
  out << "passes        " << r.passes << '\n';
  return kExitOk;
}

// --- gen --------------------------------------------------------------------

struct GenOptions {
  std::uint32_t hard_n = 0;
  Vertex n = 0;
  double density = 0.0;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_gen_hard(const GenOptions& o, std::ostream& out) {
  if (o.hard_n == 0) throw UsageError("--N must be >= 1");
  const auto h = gen_hard_instance(o.hard_n);
  const auto source = h.source();
  if (o.out.empty()) {
    write_source(out, *source);
  } else {
    write_source_file(o.out, *source);
    out << "wrote " << h.edge_count() << " edges on " << h.n_a() << " + " << h.n_b()
        << " vertices to " << o.out << '\n';
  }
  return kExitOk;
}

int cmd_gen_random(const GenOptions& o, std::ostream& out) {
  const auto inst = gen_random_planted(o.n, o.density, o.seed);
  if (o.out.empty()) {
    write_graph(out, inst.graph);
  } else {
    write_graph_file(o.out, inst.graph);
    out << "wrote " << inst.graph.edge_count() << " edges, planted matching of size " << o.n
        << ", to " << o.out << '\n';
  }
  return kExitOk;
}

// --- rs ---------------------------------------------------------------------

struct RsOptions {
  std::uint32_t m = 3;
  std::uint32_t k = 1;
  std::optional<std::uint32_t> threshold;
  std::string dir;
  std::string out;
  bool plus = false;
  std::uint64_t seed = 0;
  std::size_t pair = 0;
  std::optional<std::size_t> sample_size;
};

RSInstance build_certified(std::uint32_t m, std::uint32_t k, std::optional<std::uint32_t> threshold,
                           std::optional<std::vector<IndexSet>> family = std::nullopt) {
  ColouringParams params = [&] {
    try {
      return ColouringParams::make(m, k);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }();
  if (!family) family = build_family(params, threshold.value_or(params.intersection_threshold()));
  RSInstance inst = [&] {
    try {
      return build_rs_instance(params, std::move(*family));
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }();
  inst.certificate = certify_rs(inst);
  return inst;
}

void print_certificate(std::ostream& out, const RSInstance& inst) {
  const auto& c = *inst.certificate;
  out << "matchings          " << inst.matching_count() << " (family of " << inst.pairs.size()
      << ")\n";
  out << "pairs_checked      " << c.pairs_checked << '\n';
  out << "shared_edges       " << c.shared_edges << '\n';
  out << "induced_violations " << c.induced_violations << '\n';
  out << "cross_violations   " << c.cross_violations << '\n';
  out << "colour_conflicts   " << c.colour_conflicts << '\n';
  out << "sizes_mirror       " << (c.sizes_mirror ? "yes" : "no") << '\n';
  out << "invalid_unions     " << c.invalid_unions.size() << '\n';
  for (std::size_t i = 0; i < c.matched_fraction.size(); ++i) {
    out << "matched_fraction   " << i << ' ' << num(c.matched_fraction[i]) << " (target "
        << num(c.target_fraction) << ")\n";
  }
  out << "certificate        " << (c.ok() ? "ok" : "FAILED") << '\n';
}

int cmd_rs_build(const RsOptions& o, std::ostream& out) {
  if (o.out.empty()) throw UsageError("--out directory is required");
  const RSInstance inst = build_certified(o.m, o.k, o.threshold);
  std::filesystem::create_directories(o.out);
  const std::filesystem::path dir(o.out);
  write_graph_file(dir / "graph.txt", inst.union_graph());
  {
    auto manifest = open_output((dir / "manifest.txt").string());
    write_rs_manifest(manifest, inst);
  }
  print_certificate(out, inst);
  return inst.certificate->ok() ? kExitOk : kExitCertification;
}

int cmd_rs_certify(const RsOptions& o, std::ostream& out) {
  RSInstance inst;
  if (!o.dir.empty()) {
    const std::filesystem::path dir(o.dir);
    std::ifstream manifest(dir / "manifest.txt");
    if (!manifest) throw std::runtime_error("cannot open " + (dir / "manifest.txt").string());
    ManifestHeader header;
    try {
      header = read_rs_manifest(manifest);
    } catch (const std::runtime_error& e) {
      throw FormatError(0, e.what());
    }
    inst = build_certified(header.m, header.k, std::nullopt, header.family);
    // The stored graph must be exactly the union of the rebuilt matchings.
    const BipartiteGraph stored = read_graph_file(dir / "graph.txt");
    const BipartiteGraph rebuilt = inst.union_graph();
    bool same = stored.n_a() == rebuilt.n_a() && stored.n_b() == rebuilt.n_b() &&
                stored.edge_count() == rebuilt.edge_count();
    for (std::size_t i = 0; same && i < stored.edge_count(); ++i) {
      same = stored.edges()[i] == rebuilt.edges()[i];
    }
    print_certificate(out, inst);
    if (!same) {
      out << "graph.txt does not match the manifest's construction\n";
      return kExitCertification;
    }
  } else {
    inst = build_certified(o.m, o.k, o.threshold);
    print_certificate(out, inst);
  }
  return inst.certificate->ok() ? kExitOk : kExitCertification;
}

int cmd_rs_lambda(const RsOptions& o, std::ostream& out) {
  const RSInstance inst = build_certified(o.m, o.k, o.threshold);
  if (!inst.certificate->ok()) {
    print_certificate(out, inst);
    return kExitCertification;
  }
  LambdaOptions lo;
  lo.plus = o.plus;
  lo.seed = o.seed;
  lo.designated_pair = o.pair;
  lo.sample_size = o.sample_size;
  CommInstance comm;
  try {
    comm = gen_lambda(inst, lo);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (o.out.empty()) {
    write_graph(out, comm.graph);
    return kExitOk;
  }
  write_graph_file(o.out, comm.graph);
  out << (comm.plus ? "lambda+" : "lambda") << " instance: " << comm.graph.n_a() << " + "
      << comm.graph.n_b() << " vertices, " << comm.graph.edge_count() << " edges\n";
  out << "special   " << comm.special << " of " << comm.matchings << '\n';
  out << "alice     " << comm.alice.size() << '\n';
  out << "bob       " << comm.bob.size() << '\n';
  out << "pads      " << comm.x_pads << " + " << comm.y_pads << '\n';
  if (comm.plus) out << "overlay   " << comm.overlay.size() << '\n';
  out << "wrote " << o.out << '\n';
  return kExitOk;
}

// --- oracle -----------------------------------------------------------------

int cmd_oracle(const std::string& input, std::ostream& out) {
  const BipartiteGraph g = read_graph_file(input);
  out << maximum_matching(g).size() << '\n';
  return kExitOk;
}

// --- experiment -------------------------------------------------------------

struct ExperimentOptions {
  bool analytic = false;
  std::vector<std::uint32_t> d_list{1, 2, 3, 4, 5};
  double p_step = 0.01;
  std::vector<std::string> p_list{"sqrt2-1"};
  std::string source = "planted";
  Vertex n = 200;
  double density = 0.02;
  std::string input;
  std::uint32_t trials = 1;
  std::uint64_t seed_base = 0;
  std::string out;
  std::string format = "csv";
};

void analytic_sweep(const ExperimentOptions& o, std::ostream& csv) {
  if (!(o.p_step > 0.0 && o.p_step <= 1.0)) throw UsageError("--p-step must lie in (0, 1]");
  const auto steps = static_cast<std::uint64_t>(std::llround(1.0 / o.p_step));
  if (steps == 0 || std::abs(steps * o.p_step - 1.0) > 1e-9) {
    throw UsageError("--p-step must divide 1");
  }
  csv << "d,p,predicted,kind\n";
  for (const std::uint32_t d : o.d_list) {
    for (std::uint64_t i = 1; i <= steps; ++i) {
      const double p = i == steps ? 1.0 : static_cast<double>(i) / static_cast<double>(steps);
      csv << d << ',' << num(p) << ',' << num(predicted_factor(p, d)) << ",grid\n";
    }
    const auto best = best_setting(d);
    csv << d << ',' << num(best.p) << ',' << num(best.factor) << ",optimum\n";
  }
}

void empirical_sweep(const ExperimentOptions& o, std::ostream& csv) {
  std::vector<double> ps;
  for (const auto& text : o.p_list) {
    try {
      ps.push_back(parse_probability(text));
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  if (o.trials < 1) throw UsageError("--trials must be >= 1");
  std::optional<BipartiteGraph> file_graph;
  std::optional<std::uint64_t> file_mu;
  if (o.source == "file") {
    if (o.input.empty()) throw UsageError("--source file needs --input");
    file_graph = read_graph_file(o.input);
    file_mu = maximum_matching(*file_graph).size();
  } else if (o.source != "planted" && o.source != "hard") {
    throw UsageError("--source must be planted, hard or file");
  }

  csv << "d,p,trial,seed,predicted,realized,first_pass,sampled,left_wings,right_wings,"
         "candidates,augmentations,final,mu,epsilon,peak_space,passes,status\n";
  const auto workload = [&](std::uint64_t seed) {
    Workload w;
    if (o.source == "planted") {
      auto inst = gen_random_planted(o.n, o.density, seed);
      w.graph = std::move(inst.graph);
      w.known_mu = o.n;
    } else if (o.source == "hard") {
      w.hard = gen_hard_instance(o.n);
      w.known_mu = w.hard->mu();
    } else {
      w.graph = *file_graph;
      w.known_mu = file_mu;
    }
    return w;
  };
  for (const std::uint32_t d : o.d_list) {
    for (const double p : ps) {
      for (std::uint32_t trial = 0; trial < o.trials; ++trial) {
        const std::uint64_t seed = derive_seed(o.seed_base, trial);
        csv << d << ',' << num(p) << ',' << trial << ',' << seed << ',';
        try {
          const Workload w = workload(seed);
          const MetaParams params{p, d, seed};
          params.validate();
          auto stream = open_stream(w.source());
          const auto r = two_pass(stream, params, w.known_mu).report;
          csv << num(predicted_factor(p, d)) << ',' << num(r.ratio()) << ',' << r.first_pass_size
              << ',' << r.sampled_size << ',' << r.left_wings << ',' << r.right_wings << ','
              << r.candidates << ',' << r.augmentations << ',' << r.final_size << ',' << *r.mu
              << ',' << num(r.epsilon()) << ',' << r.peak_space << ',' << r.passes << ",ok\n";
        } catch (const std::exception& e) {
          std::string why = e.what();
          for (char& c : why) {
            if (c == ',' || c == '\n') c = ';';
          }
          csv << "0,0,0,0,0,0,0,0,0,0,0,0,0,error: " << why << '\n';
        }
      }
    }
  }
}

int cmd_experiment(const ExperimentOptions& o, std::ostream& out) {
  if (o.format != "csv") throw UsageError("experiment output is csv only");
  if (o.d_list.empty()) throw UsageError("--d-list must not be empty");
  for (const auto d : o.d_list) {
    if (d < 1) throw UsageError("degree bounds must be >= 1");
  }
  std::ostringstream csv;
  if (o.analytic) {
    analytic_sweep(o, csv);
  } else {
    empirical_sweep(o, csv);
  }
  if (o.out.empty()) {
    out << csv.str();
  } else {
    auto file = open_output(o.out);
    file << csv.str();
    out << "wrote " << o.out << '\n';
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-pass semi-streaming bipartite matching toolkit", "ssmatch"};
  app.require_subcommand(1);

  RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "run the two-pass algorithm on a graph");
  run_cmd->add_option("--input", run.input, "graph file");
  run_cmd->add_option("--hard", run.hard_n, "use the streamed worst-case instance with this N");
  run_cmd->add_option("--planted", run.planted_n, "use a random planted instance with n + n vertices");
  run_cmd->add_option("--density", run.density, "extra-edge density for --planted");
  run_cmd->add_option("--d", run.d, "degree bound")->capture_default_str();
  run_cmd->add_option("--p", run.p, "sampling probability or sqrt2-1")->capture_default_str();
  run_cmd->add_option("--seed", run.seed, "PRNG seed")->capture_default_str();
  run_cmd->add_flag("--no-oracle", run.no_oracle, "skip the exact matching number");
  run_cmd->add_option("--mu", run.mu, "known matching number");
  run_cmd->add_option("--format", run.format, "text or csv")
      ->check(CLI::IsMember({"text", "csv"}))
      ->capture_default_str();

  GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "generate instances");
  gen_cmd->require_subcommand(1);
  auto* gen_hard = gen_cmd->add_subcommand("hard", "worst-case instance, streamed to the file");
  gen_hard->add_option("--N", gen.hard_n, "block size N")->required();
  gen_hard->add_option("--out", gen.out, "output file (stdout if omitted)");
  auto* gen_random = gen_cmd->add_subcommand("random", "random graph with a planted perfect matching");
  gen_random->add_option("--n", gen.n, "vertices per side")->required();
  gen_random->add_option("--density", gen.density, "extra-edge probability")->capture_default_str();
  gen_random->add_option("--seed", gen.seed, "PRNG seed")->capture_default_str();
  gen_random->add_option("--out", gen.out, "output file (stdout if omitted)");

  RsOptions rs;
  auto* rs_cmd = app.add_subcommand("rs", "Ruzsa-Szemeredi construction");
  rs_cmd->require_subcommand(1);
  const auto add_params = [&rs](CLI::App* cmd) {
    cmd->add_option("--m", rs.m, "dimension (multiple of 3)")->capture_default_str();
    cmd->add_option("--k", rs.k, "white strip width, |I|")->capture_default_str();
    cmd->add_option("--threshold", rs.threshold, "maximum pairwise family intersection");
  };
  auto* rs_build = rs_cmd->add_subcommand("build", "build, certify and write graph + manifest");
  add_params(rs_build);
  rs_build->add_option("--out", rs.out, "output directory")->required();
  auto* rs_certify = rs_cmd->add_subcommand("certify", "certify a written or fresh construction");
  add_params(rs_certify);
  rs_certify->add_option("--dir", rs.dir, "directory written by rs build");
  auto* rs_lambda = rs_cmd->add_subcommand("lambda", "emit a lambda or lambda+ instance");
  add_params(rs_lambda);
  rs_lambda->add_flag("--plus", rs.plus, "overlay the perfect matching P first in the stream");
  rs_lambda->add_option("--seed", rs.seed, "PRNG seed")->capture_default_str();
  rs_lambda->add_option("--pair", rs.pair, "designated family member for P")->capture_default_str();
  rs_lambda->add_option("--sample-size", rs.sample_size, "edges kept per matching");
  rs_lambda->add_option("--out", rs.out, "output graph file (stdout if omitted)");

  std::string oracle_input;
  auto* oracle_cmd = app.add_subcommand("oracle", "print the exact matching number");
  oracle_cmd->add_option("--input", oracle_input, "graph file")->required();

  ExperimentOptions ex;
  auto* ex_cmd = app.add_subcommand("experiment", "parameter sweeps to CSV");
  ex_cmd->add_flag("--analytic", ex.analytic, "emit predicted factor curves only");
  ex_cmd->add_option("--d-list", ex.d_list, "degree bounds")->delimiter(',')->capture_default_str();
  ex_cmd->add_option("--p-step", ex.p_step, "grid step for --analytic")->capture_default_str();
  ex_cmd->add_option("--p-list", ex.p_list, "sampling probabilities")->delimiter(',');
  ex_cmd->add_option("--source", ex.source, "planted, hard or file")->capture_default_str();
  ex_cmd->add_option("--n", ex.n, "instance size (n per side, or N for hard)")->capture_default_str();
  ex_cmd->add_option("--density", ex.density, "extra-edge density for planted")->capture_default_str();
  ex_cmd->add_option("--input", ex.input, "graph file for --source file");
  ex_cmd->add_option("--trials", ex.trials, "repeats per grid point")->capture_default_str();
  ex_cmd->add_option("--seed", ex.seed_base, "base seed")->capture_default_str();
  ex_cmd->add_option("--out", ex.out, "CSV file (stdout if omitted)");
  ex_cmd->add_option("--format", ex.format, "csv")->capture_default_str();

  std::vector<std::string> argv_storage{"ssmatch"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*run_cmd) return cmd_run(run, out);
    if (*gen_hard) return cmd_gen_hard(gen, out);
    if (*gen_random) return cmd_gen_random(gen, out);
    if (*rs_build) return cmd_rs_build(rs, out);
    if (*rs_certify) return cmd_rs_certify(rs, out);
    if (*rs_lambda) return cmd_rs_lambda(rs, out);
    if (*oracle_cmd) return cmd_oracle(oracle_input, out);
    if (*ex_cmd) return cmd_experiment(ex, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const FormatError& e) {
    err << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const GraphError& e) {
    err << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace ssm
