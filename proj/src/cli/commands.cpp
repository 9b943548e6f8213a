/**
 * Copyright 2026 The ABRW Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "abrw/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "abrw/error.hpp"
#include "abrw/graph.hpp"
#include "abrw/manifest.hpp"
#include "abrw/protocol.hpp"
#include "abrw/rng.hpp"
#include "abrw/sgns.hpp"
#include "text_io.hpp"

namespace abrw::cli {

namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kNegativeStream = 0x6e6567;

int default_threads() {
  if (const char* env = std::getenv("ABRW_THREADS")) {
    if (auto v = detail::parse_uint(env); v && *v >= 1 && *v <= 1024) return static_cast<int>(*v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// --- text conversion for manifest values ---------------------------------

std::string to_text(const std::string& v) { return v; }
std::string to_text(bool v) { return v ? "true" : "false"; }
std::string to_text(double v) { return detail::format_real(v); }
template <typename T>
  requires std::is_integral_v<T>
std::string to_text(T v) {
  return std::to_string(v);
}
template <typename T>
std::string to_text(const std::vector<T>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + to_text(v[i]);
  return s;
}

/// Binds options of one subcommand and remembers how to print their
/// resolved values into a manifest.
class OptionSet {
 public:
  explicit OptionSet(CLI::App* app) : app_(app) {}

  template <typename T>
  CLI::Option* add(const std::string& name, T& target, const std::string& help) {
    auto* opt = app_->add_option("--" + name, target, help)->capture_default_str();
    if constexpr (requires { target.push_back(target.front()); }) opt->delimiter(',');
    keys_.emplace_back(name, [&target] { return to_text(target); });
    return opt;
  }

  CLI::Option* flag(const std::string& name, bool& target, const std::string& help) {
    keys_.emplace_back(name, [&target] { return to_text(target); });
    return app_->add_flag("--" + name, target, help);
  }

  /// Accepted on the command line, not recorded (paths of the run's own
  /// bookkeeping files).
  CLI::Option* untracked(const std::string& name, std::string& target, const std::string& help) {
    return app_->add_option("--" + name, target, help);
  }

  void record(RunManifest& m) const {
    for (const auto& [key, value] : keys_) m.set(key, value());
  }

  CLI::App* app() const noexcept { return app_; }

 private:
  CLI::App* app_;
  std::vector<std::pair<std::string, std::function<std::string()>>> keys_;
};

/// Output files are written next to their destination and renamed into place
/// by commit(); anything not committed is deleted.
class OutputFiles {
 public:
  OutputFiles() = default;
  OutputFiles(const OutputFiles&) = delete;
  OutputFiles& operator=(const OutputFiles&) = delete;
  ~OutputFiles() {
    for (auto& p : pending_) {
      p.stream.reset();
      std::error_code ec;
      fs::remove(p.temp, ec);
    }
  }

  std::ostream& open(const fs::path& path) {
    for (const auto& p : pending_) {
      if (p.target == path) throw InvalidArgument("output path used twice: " + path.string());
    }
    Pending p{path, path.string() + ".partial", nullptr};
    p.stream = std::make_unique<std::ofstream>(p.temp, std::ios::binary | std::ios::trunc);
    if (!*p.stream) throw Error("cannot write " + path.string());
    pending_.push_back(std::move(p));
    return *pending_.back().stream;
  }

  void commit() {
    for (auto& p : pending_) {
      p.stream->flush();
      if (!*p.stream) throw Error("write failed: " + p.target.string());
      p.stream.reset();
    }
    std::vector<fs::path> moved;
    for (auto& p : pending_) {
      std::error_code ec;
      fs::rename(p.temp, p.target, ec);
      if (ec) {
        for (const auto& m : moved) fs::remove(m, ec);
        throw Error("cannot move output into place: " + p.target.string());
      }
      moved.push_back(p.target);
    }
    pending_.clear();
  }

 private:
  struct Pending {
    fs::path target;
    fs::path temp;
    std::unique_ptr<std::ofstream> stream;
  };
  std::vector<Pending> pending_;
};

fs::path manifest_path(const std::string& explicit_path, const std::string& output) {
  return explicit_path.empty() ? fs::path(output + ".manifest") : fs::path(explicit_path);
}

RunManifest start_manifest(const std::string& command) {
  RunManifest m;
  m.set("command", command);
  m.set("version", std::string(kToolkitVersion));
  return m;
}

// --- shared option groups ------------------------------------------------

struct GraphOptions {
  std::string edges;
  std::string attributes;
  bool directed = false;
  bool weighted = false;
  bool attr_adds_nodes = false;

  void bind(OptionSet& set, bool attributes_option = true) {
    set.add("edges", edges, "edge list `src dst [weight]`")->required();
    if (attributes_option) set.add("attributes", attributes, "node attribute file (dense or sparse)");
    set.flag("directed", directed, "treat links as directed");
    set.flag("weighted", weighted, "read the third column as link weight");
    if (attributes_option) {
      set.flag("attr-adds-nodes", attr_adds_nodes, "attribute rows may introduce nodes without links");
    }
  }

  AttributedGraph load(bool with_attributes, RunManifest& manifest) const {
    auto graph = load_edge_list(edges, directed, weighted);
    manifest.set("sha256.edges", sha256_file(edges));
    if (with_attributes && !attributes.empty()) {
      graph = load_attributes(graph, attributes,
                              attr_adds_nodes ? UnknownNodePolicy::kAddIsolated : UnknownNodePolicy::kError);
      manifest.set("sha256.attributes", sha256_file(attributes));
    }
    return graph;
  }
};

struct ModelOptions {
  std::string method = "abrw";
  std::size_t dim = 128;
  std::size_t walks = 10;
  std::size_t length = 80;
  std::size_t window = 10;
  std::size_t topk = 30;
  double alpha = 0.8;
  std::size_t negatives = 5;
  std::size_t epochs = 5;
  double lr = 0.025;
  double lr_final = 0.0001;
  double ns_exponent = 0.75;
  std::uint64_t seed = 0;
  int threads = default_threads();
  bool deterministic = false;

  void bind(OptionSet& set, bool method_option = true) {
    if (method_option) {
      set.add("method", method, "abrw, deepwalk or attrpure")
          ->check(CLI::IsMember({"abrw", "deepwalk", "attrpure"}));
    }
    set.add("dim", dim, "embedding dimension")->check(CLI::PositiveNumber);
    set.add("walks", walks, "walks per node")->check(CLI::PositiveNumber);
    set.add("length", length, "nodes per walk")->check(CLI::PositiveNumber);
    set.add("window", window, "skip-gram window, center included")->check(CLI::Range(2, 1 << 20));
    set.add("topk", topk, "attribute neighbours kept per node")->check(CLI::PositiveNumber);
    set.add("alpha", alpha, "weight of structure against attributes")->check(CLI::Range(0.0, 1.0));
    set.add("negatives", negatives, "negative samples per pair");
    set.add("epochs", epochs, "passes over the pair corpus");
    set.add("lr", lr, "initial learning rate")->check(CLI::PositiveNumber);
    set.add("lr-final", lr_final, "final learning rate")->check(CLI::NonNegativeNumber);
    set.add("ns-exponent", ns_exponent, "exponent of the negative-sampling distribution");
    set.add("seed", seed, "random seed");
    set.add("threads", threads, "worker threads (env ABRW_THREADS)")->check(CLI::Range(1, 1024));
    set.flag("deterministic", deterministic, "single-threaded, bit-reproducible training (default)");
  }

  /// Training runs in parallel only when more than one thread is requested
  /// without --deterministic.
  void resolve(const CLI::App* app) {
    const bool threads_given = app->get_option("--threads")->count() > 0;
    if (!threads_given || threads <= 1) deterministic = true;
  }

  EmbedSettings settings() const {
    EmbedSettings s;
    s.method = parse_method(method);
    s.fusion.alpha = alpha;
    s.fusion.top_k = topk;
    s.walk.walks_per_node = walks;
    s.walk.walk_length = length;
    s.train.dim = dim;
    s.train.window = window;
    s.train.negatives = negatives;
    s.train.ns_exponent = ns_exponent;
    s.train.epochs = epochs;
    s.train.lr_initial = lr;
    s.train.lr_final = lr_final;
    s.train.deterministic = deterministic;
    s.train.threads = deterministic ? 1 : threads;
    s.threads = threads;
    s = s.reseeded(seed);
    s.fusion.validate();
    s.walk.validate();
    s.train.validate();
    return s;
  }
};

// --- subcommands ---------------------------------------------------------

struct PerturbCommand {
  std::string input, output, removed, manifest;
  double fraction = 0.0;
  std::uint64_t seed = 0;
  bool directed = false, weighted = false, negatives = false;

  explicit PerturbCommand(CLI::App* app) : set(app) {
    set.add("input", input, "edge list to perturb")->required();
    set.add("output", output, "reduced edge list")->required();
    set.add("removed", removed, "removed links as samples (default: <output>.removed)");
    set.add("remove-links", fraction, "fraction of links to remove")->required()->check(CLI::Range(0.0, 1.0));
    set.add("seed", seed, "random seed");
    set.flag("directed", directed, "treat links as directed");
    set.flag("weighted", weighted, "read the third column as link weight");
    set.flag("negatives", negatives, "append as many non-links of the input as links removed");
    set.untracked("manifest", manifest, "manifest path (default: <output>.manifest)");
  }

  void operator()(std::ostream& out) {
    if (removed.empty()) removed = output + ".removed";
    auto m = start_manifest("perturb");
    const auto graph = load_edge_list(input, directed, weighted);
    m.set("sha256.input", sha256_file(input));
    auto result = remove_links(graph, fraction, seed);
    std::vector<EdgeSample> samples = result.removed;
    if (negatives) {
      const auto neg = sample_negative_edges(graph, result.removed.size(), derive_seed(seed, kNegativeStream));
      samples.insert(samples.end(), neg.begin(), neg.end());
    }
    set.record(m);
    m.set("result.links_kept", std::to_string(result.graph.num_links()));
    m.set("result.links_removed", std::to_string(result.removed.size()));

    OutputFiles files;
    write_edge_list(files.open(output), result.graph);
    write_samples(files.open(removed), graph.nodes(), samples);
    m.write(files.open(manifest_path(manifest, output)));
    files.commit();
    out << "removed " << result.removed.size() << " of " << graph.num_links() << " links\n";
  }

  OptionSet set;
};

struct EmbedCommand {
  GraphOptions graph_opts;
  ModelOptions model;
  std::string output, manifest;

  explicit EmbedCommand(CLI::App* app) : set(app) {
    graph_opts.bind(set);
    model.bind(set);
    set.add("output", output, "embedding file")->required();
    set.untracked("manifest", manifest, "manifest path (default: <output>.manifest)");
  }

  void operator()(std::ostream& out, std::ostream& err) {
    model.resolve(set.app());
    const auto settings = model.settings();
    const bool needs_attributes = settings.method != Method::kDeepWalk;
    if (needs_attributes && graph_opts.attributes.empty()) {
      throw InvalidArgument(std::string(method_name(settings.method)) + " needs --attributes");
    }
    if (!needs_attributes && !graph_opts.attributes.empty()) {
      err << "warning: deepwalk ignores the attribute file " << graph_opts.attributes << '\n';
    }
    auto m = start_manifest("embed");
    const auto graph = graph_opts.load(needs_attributes, m);
    const auto z = embed(graph, settings);
    set.record(m);
    m.set("result.nodes", std::to_string(graph.num_nodes()));
    m.set("result.links", std::to_string(graph.num_links()));
    m.set("result.attributes", std::to_string(graph.num_attributes()));

    OutputFiles files;
    write_embedding(files.open(output), graph.nodes(), z);
    m.write(files.open(manifest_path(manifest, output)));
    files.commit();
    out << "embedded " << z.rows() << " nodes in " << z.dim() << " dimensions\n";
  }

  OptionSet set;
};

/// Shared by the eval tasks: results go to --output or standard output.
struct CsvTarget {
  std::string output, manifest;

  void bind(OptionSet& set, const char* help) {
    set.add("output", output, help);
    set.untracked("manifest", manifest, "manifest path (default: <output>.manifest when --output is set)");
  }

  void emit(std::span<const MetricRow> rows, RunManifest& m, std::ostream& out) const {
    if (output.empty()) {
      write_metrics_csv(out, rows);
      if (!manifest.empty()) {
        OutputFiles files;
        m.write(files.open(manifest));
        files.commit();
      }
      return;
    }
    OutputFiles files;
    write_metrics_csv(files.open(output), rows);
    m.write(files.open(manifest_path(manifest, output)));
    files.commit();
  }
};

struct LinkPredictionCommand {
  std::string embedding, samples;
  CsvTarget target;

  explicit LinkPredictionCommand(CLI::App* app) : set(app) {
    set.add("embedding", embedding, "embedding file")->required();
    set.add("samples", samples, "ground truth `src dst 1|0`")->required();
    target.bind(set, "CSV file (default: standard output)");
  }

  void operator()(std::ostream& out, std::ostream& err) {
    auto m = start_manifest("eval lp");
    auto loaded = load_embedding(embedding);
    // Nodes left isolated by `perturb` are absent from the reduced edge list
    // and so from the embedding; they score as zero vectors.
    const std::size_t known = loaded.nodes.size();
    {
      std::ifstream in(samples);
      if (!in) throw Error("cannot open " + samples);
      std::string line, src, dst;
      while (std::getline(in, line)) {
        std::istringstream fields(line);
        if (!(fields >> src) || src.front() == '#' || !(fields >> dst)) continue;
        loaded.nodes.intern(src);
        loaded.nodes.intern(dst);
      }
    }
    if (loaded.nodes.size() > known) {
      EmbeddingMatrix padded(loaded.nodes.size(), loaded.z.dim());
      std::copy(loaded.z.data().begin(), loaded.z.data().end(), padded.data().begin());
      loaded.z = std::move(padded);
      err << "warning: " << loaded.nodes.size() - known << " sample nodes have no embedding; scored as zero vectors\n";
    }
    const auto truth = load_samples(loaded.nodes, samples);
    m.set("sha256.embedding", sha256_file(embedding));
    m.set("sha256.samples", sha256_file(samples));
    const auto result = link_prediction_auc(loaded.z, truth);
    set.record(m);
    const std::vector<MetricRow> rows{{"lp", "-", "auc", result.auc}};
    target.emit(rows, m, out);
  }

  OptionSet set;
};

struct ClassificationCommand {
  std::string embedding, labels;
  double train_fraction = 0.5;
  std::size_t seeds = 10;
  std::uint64_t seed = 0;
  CsvTarget target;

  explicit ClassificationCommand(CLI::App* app) : set(app) {
    set.add("embedding", embedding, "embedding file")->required();
    set.add("labels", labels, "`id label` per line")->required();
    set.add("train-fraction", train_fraction, "share of labeled nodes used for training")
        ->check(CLI::Range(0.0, 1.0));
    set.add("seeds", seeds, "number of random splits")->check(CLI::PositiveNumber);
    set.add("seed", seed, "first split seed; split i uses seed + i");
    target.bind(set, "CSV file (default: standard output)");
  }

  void operator()(std::ostream& out, std::ostream& err) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
      throw InvalidArgument("--train-fraction must lie strictly between 0 and 1");
    }
    auto m = start_manifest("eval nc");
    const auto loaded = load_embedding(embedding);
    const auto label_set = load_labels(loaded.nodes, labels);
    m.set("sha256.embedding", sha256_file(embedding));
    m.set("sha256.labels", sha256_file(labels));
    std::vector<MetricRow> rows;
    for (std::size_t i = 0; i < seeds; ++i) {
      const auto result = node_classification(loaded.z, label_set, train_fraction, seed + i);
      for (const auto& w : result.warnings) err << "warning: seed " << seed + i << ": " << w << '\n';
      rows.push_back({"nc", std::to_string(seed + i), "micro_f1", result.micro_f1});
    }
    set.record(m);
    target.emit(rows, m, out);
  }

  OptionSet set;
};

struct VisualizationCommand {
  std::string embedding, labels, output, manifest;

  explicit VisualizationCommand(CLI::App* app) : set(app) {
    set.add("embedding", embedding, "embedding file")->required();
    set.add("labels", labels, "optional `id label` file");
    set.add("output", output, "`id x y label` per node")->required();
    set.untracked("manifest", manifest, "manifest path (default: <output>.manifest)");
  }

  void operator()(std::ostream& out) {
    auto m = start_manifest("eval viz");
    const auto loaded = load_embedding(embedding);
    m.set("sha256.embedding", sha256_file(embedding));
    LabelSet label_set;
    if (!labels.empty()) {
      label_set = load_labels(loaded.nodes, labels);
      m.set("sha256.labels", sha256_file(labels));
    }
    const auto pca = pca_2d(loaded.z);
    set.record(m);
    m.set("result.explained_variance",
          detail::format_real(pca.explained_variance[0]) + "," + detail::format_real(pca.explained_variance[1]));

    OutputFiles files;
    write_coordinates(files.open(output), loaded.nodes, pca.coordinates, label_set);
    m.write(files.open(manifest_path(manifest, output)));
    files.commit();
    out << "wrote " << pca.coordinates.rows() << " coordinates\n";
  }

  OptionSet set;
};

struct SweepCommand {
  GraphOptions graph_opts;
  ModelOptions model;
  std::vector<double> alphas{0.2, 0.4, 0.6, 0.8};
  std::vector<std::size_t> topks{30};
  std::size_t seeds = 10;
  std::uint64_t base_seed = 0;
  double ground_truth = 0.1;
  double preserved = 1.0;
  CsvTarget target;

  explicit SweepCommand(CLI::App* app) : set(app) {
    graph_opts.bind(set);
    model.bind(set, false);
    set.add("alphas", alphas, "comma-separated alpha grid");
    set.add("topks", topks, "comma-separated top-k grid");
    set.add("seeds", seeds, "runs per cell")->check(CLI::PositiveNumber);
    set.add("base-seed", base_seed, "run i of every cell uses base-seed + i");
    set.add("ground-truth", ground_truth, "fraction of links held out as positives")
        ->check(CLI::Range(0.0, 1.0));
    set.add("preserved", preserved, "fraction of the remaining links kept for embedding")
        ->check(CLI::Range(0.0, 1.0));
    target.bind(set, "CSV file (default: standard output)");
  }

  void operator()(std::ostream& out) {
    if (graph_opts.attributes.empty()) throw InvalidArgument("sweep needs --attributes");
    model.resolve(set.app());
    auto m = start_manifest("eval sweep");
    const auto graph = graph_opts.load(true, m);
    const auto settings = model.settings();
    std::vector<std::uint64_t> seed_list(seeds);
    std::iota(seed_list.begin(), seed_list.end(), base_seed);
    const auto cells =
        run_sensitivity_sweep(graph, alphas, topks, settings, LinkPredictionProtocol{ground_truth, preserved}, seed_list);
    set.record(m);
    const auto rows = sweep_rows(cells);
    target.emit(rows, m, out);
  }

  OptionSet set;
};

// --- config replay -------------------------------------------------------

std::string option_name(std::string_view token) {
  if (!token.starts_with("--")) return {};
  const auto eq = token.find('=');
  return std::string(token.substr(0, eq));
}

std::optional<std::string> find_config(const std::vector<std::string>& args) {
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
    if (args[i].starts_with("--config=")) return args[i].substr(9);
  }
  return std::nullopt;
}

/// Appends `--key=value` for every manifest key that names an option of the
/// selected subcommand and was not given on the command line.
void apply_config(CLI::App& app, std::vector<std::string>& args, const std::string& config_path) {
  std::ifstream in(config_path);
  if (!in) throw InvalidArgument("cannot open config file " + config_path);
  const auto config = RunManifest::read(in);

  CLI::App* sub = &app;
  for (std::size_t i = 1; i < args.size() && !args[i].starts_with("-"); ++i) {
    CLI::App* next = sub->get_subcommand_no_throw(args[i]);
    if (!next) break;
    sub = next;
  }
  if (sub == &app) throw InvalidArgument("--config needs a subcommand");

  std::vector<std::string> given;
  for (const auto& a : args) given.push_back(option_name(a));
  std::vector<std::string> extra;
  for (const auto& [key, value] : config.entries()) {
    const std::string name = "--" + key;
    if (key == "config" || key == "manifest" || value.empty()) continue;
    if (!sub->get_option_no_throw(name)) continue;
    if (std::find(given.begin(), given.end(), name) != given.end()) continue;
    extra.push_back(name + "=" + value);
  }
  args.insert(args.end(), extra.begin(), extra.end());
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Attributed biased random walk embedding toolkit", "abrw"};
  app.set_version_flag("--version", std::string(kToolkitVersion));
  app.require_subcommand(1);
  std::string config_unused;
  auto add_config = [&](CLI::App* sub) {
    sub->add_option("--config", config_unused, "manifest or key = value file; flags take precedence");
  };

  auto* perturb_app = app.add_subcommand("perturb", "remove a random fraction of links");
  auto* embed_app = app.add_subcommand("embed", "learn node embeddings");
  auto* eval_app = app.add_subcommand("eval", "evaluate embeddings");
  eval_app->require_subcommand(1);
  auto* lp_app = eval_app->add_subcommand("lp", "link prediction AUC");
  auto* nc_app = eval_app->add_subcommand("nc", "node classification micro-F1");
  auto* viz_app = eval_app->add_subcommand("viz", "2-D PCA coordinates");
  auto* sweep_app = eval_app->add_subcommand("sweep", "alpha / top-k link prediction grid");
  for (auto* sub : {perturb_app, embed_app, lp_app, nc_app, viz_app, sweep_app}) add_config(sub);

  PerturbCommand perturb(perturb_app);
  EmbedCommand embed_cmd(embed_app);
  LinkPredictionCommand lp(lp_app);
  ClassificationCommand nc(nc_app);
  VisualizationCommand viz(viz_app);
  SweepCommand sweep(sweep_app);

  std::vector<std::string> args(argv, argv + argc);
  if (args.empty()) args.emplace_back("abrw");
  try {
    if (auto config = find_config(args)) apply_config(app, args, *config);
    std::vector<const char*> raw;
    for (const auto& a : args) raw.push_back(a.c_str());
    app.parse(static_cast<int>(raw.size()), raw.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (perturb_app->parsed()) perturb(out);
    if (embed_app->parsed()) embed_cmd(out, err);
    if (lp_app->parsed()) lp(out, err);
    if (nc_app->parsed()) nc(out, err);
    if (viz_app->parsed()) viz(out);
    if (sweep_app->parsed()) sweep(out);
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace abrw::cli
