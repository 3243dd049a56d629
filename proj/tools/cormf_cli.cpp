#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cormf/bounds.hpp"
#include "cormf/datasets.hpp"
#include "cormf/error.hpp"
#include "cormf/estimator.hpp"
#include "cormf/io.hpp"
#include "cormf/nmf.hpp"
#include "cormf/ordering.hpp"
#include "cormf/rng.hpp"
#include "cormf/train.hpp"

#ifndef CORMF_VERSION
#define CORMF_VERSION "unknown"
#endif

namespace fs = std::filesystem;
using cormf::io::json;
using namespace cormf;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kNumeric = 2, kGuard = 3 };

struct Manifest {
  std::string command;
  json parameters = json::object();
  std::vector<std::string> artifacts;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  json to_json() const {
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return {{"command", command},
            {"parameters", parameters},
            {"artifacts", artifacts},
            {"wall_clock_seconds", wall},
            {"version", CORMF_VERSION}};
  }
};

// Writes `j` to `path` (or stdout when path is empty) and records it.
void emit(Manifest& manifest, const std::string& path, const json& j) {
  if (path.empty()) {
    std::cout << j.dump(2) << '\n';
    return;
  }
  io::write_json(path, j);
  manifest.artifacts.push_back(path);
}

void emit_text(Manifest& manifest, const fs::path& path, const std::string& text) {
  io::write_text(path, text);
  manifest.artifacts.push_back(path.string());
}

void write_manifest(const Manifest& manifest, const fs::path& where) {
  io::write_json(where, manifest.to_json());
}

fs::path manifest_path_for(const std::string& out) { return fs::path(out).concat(".manifest.json"); }

std::string fmt6(double v) {
  std::ostringstream s;
  s << std::setprecision(6) << v;
  return s.str();
}

std::string pm(double mean, double sd) { return fmt6(mean) + " ± " + fmt6(sd); }

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double std_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

IsingModel load_model(const std::string& spec) {
  if (fs::exists(spec)) return io::model_from_json(io::read_json(spec));
  // Catalog names are accepted wherever a model file is.
  for (const auto& entry : datasets::catalog())
    if (entry.name == spec) return datasets::generate(entry.name);
  throw ContractError("model file not found: " + spec);
}

struct OrderOptions {
  std::string mode = "criticality";
  std::string tie_break = "index";
  std::uint64_t seed = 0;
};

TieBreak parse_tie_break(const OrderOptions& o) {
  if (o.tie_break == "index") return TieByIndex{};
  if (o.tie_break == "seeded") return TieSeeded{o.seed};
  throw ContractError("tie-break must be index or seeded");
}

CriticalityResult build_order(const IsingModel& model, const OrderOptions& o) {
  auto crit = criticality_order(model, parse_tie_break(o));
  if (o.mode == "criticality") return crit;
  if (o.mode == "inverse") return {inverse_order(crit.order), crit.forest};
  if (o.mode == "random") return {random_order(model.n(), o.seed), {}};
  throw ContractError("order mode must be criticality, random or inverse");
}

struct TrainFlags {
  long iterations = 10000;
  std::size_t batch = 1000;
  double lr = 1e-3;
  std::string anneal = "on";
  long anneal_iterations = 0;
  int layers = 2;
  int hidden = 50;

  TrainConfig config(std::uint64_t seed) const {
    TrainConfig c;
    c.iterations = iterations;
    c.batch_size = batch;
    c.learning_rate = lr;
    if (anneal != "on" && anneal != "off") throw ContractError("--anneal must be on or off");
    c.anneal.enabled = anneal == "on";
    c.anneal.duration = anneal_iterations;
    c.seed = seed;
    c.validate();
    return c;
  }
};

void add_train_flags(CLI::App* cmd, TrainFlags& f) {
  cmd->add_option("--iterations", f.iterations, "training iterations")->envname("CORMF_ITERATIONS");
  cmd->add_option("--batch", f.batch, "samples per gradient estimate")->envname("CORMF_BATCH");
  cmd->add_option("--lr", f.lr, "Adam learning rate")->envname("CORMF_LR");
  cmd->add_option("--anneal", f.anneal, "beta annealing on|off")->envname("CORMF_ANNEAL");
  cmd->add_option("--anneal-iterations", f.anneal_iterations, "annealing length (0: half the run)");
  cmd->add_option("--layers", f.layers, "recurrent layers");
  cmd->add_option("--hidden", f.hidden, "hidden units per layer");
}

json train_flags_json(const TrainFlags& f) {
  return {{"iterations", f.iterations}, {"batch", f.batch},   {"lr", f.lr},
          {"anneal", f.anneal},         {"anneal_iterations", f.anneal_iterations},
          {"layers", f.layers},         {"hidden", f.hidden}};
}

std::string history_csv(const TrainReport& r) {
  std::ostringstream s;
  io::write_history_csv(s, r);
  return s.str();
}

std::string spin_means_csv(const TrainReport& r) {
  std::ostringstream s;
  io::write_spin_means_csv(s, r);
  return s.str();
}

// ---- table1 ---------------------------------------------------------------

struct Row {
  std::string method;
  std::vector<double> free_energy;
  std::vector<double> magnetization;
  std::optional<double> fixed_free_energy;
  std::optional<double> fixed_magnetization;
  double magnetization_error = 0.0;
};

json row_json(const Row& r) {
  json j = {{"method", r.method}};
  if (!r.free_energy.empty()) {
    j["F_mean"] = mean_of(r.free_energy);
    j["F_std"] = std_of(r.free_energy);
    j["F_runs"] = r.free_energy;
  }
  if (!r.magnetization.empty()) {
    j["magnetization_mean"] = mean_of(r.magnetization);
    j["magnetization_std"] = std_of(r.magnetization);
  }
  if (r.fixed_free_energy) j["F"] = *r.fixed_free_energy;
  if (r.fixed_magnetization) {
    j["magnetization"] = *r.fixed_magnetization;
    j["magnetization_stderr"] = r.magnetization_error;
  }
  return j;
}

std::string row_text(const std::string& dataset, const Row& r) {
  std::string f = "-", m = "-";
  if (!r.free_energy.empty()) f = pm(mean_of(r.free_energy), std_of(r.free_energy));
  if (r.fixed_free_energy) f = fmt6(*r.fixed_free_energy);
  if (!r.magnetization.empty()) m = pm(mean_of(r.magnetization), std_of(r.magnetization));
  if (r.fixed_magnetization) m = r.magnetization_error > 0 ? pm(*r.fixed_magnetization, r.magnetization_error)
                                                             : fmt6(*r.fixed_magnetization);
  return "| " + dataset + " | " + r.method + " | " + f + " | " + m + " |\n";
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Criticality-ordered recurrent mean-field toolkit for Ising models"};
  app.require_subcommand(1);
  app.set_version_flag("--version", CORMF_VERSION);

  Manifest manifest;
  std::uint64_t seed = 0;
  std::string model_spec, out, out_dir;

  // gen
  auto* gen = app.add_subcommand("gen", "generate a catalog dataset");
  std::string gen_name;
  bool gen_list = false;
  std::optional<std::uint64_t> gen_seed;
  gen->add_option("--name", gen_name, "dataset name");
  gen->add_option("--seed", gen_seed, "generator seed (default: catalog seed)")->envname("CORMF_SEED");
  gen->add_option("--out", out, "output model file (stdout if omitted)");
  gen->add_flag("--list", gen_list, "list the catalog");

  // order
  auto* order_cmd = app.add_subcommand("order", "compute a spin order");
  OrderOptions order_opts;
  order_cmd->add_option("--model", model_spec, "model file or catalog name")->required();
  order_cmd->add_option("--mode", order_opts.mode, "criticality|random|inverse");
  order_cmd->add_option("--tie-break", order_opts.tie_break, "index|seeded")->envname("CORMF_TIE_BREAK");
  order_cmd->add_option("--seed", order_opts.seed, "seed for random orders and seeded ties")->envname("CORMF_SEED");
  order_cmd->add_option("--out", out, "output order file");

  // train
  auto* train_cmd = app.add_subcommand("train", "train a recurrent mean-field model");
  TrainFlags train_flags;
  std::string order_file;
  OrderOptions train_order;
  train_cmd->add_option("--model", model_spec, "model file or catalog name")->required();
  train_cmd->add_option("--order", order_file, "order file (default: criticality order)");
  train_cmd->add_option("--order-mode", train_order.mode, "criticality|random|inverse when no order file");
  train_cmd->add_option("--tie-break", train_order.tie_break, "index|seeded")->envname("CORMF_TIE_BREAK");
  train_cmd->add_option("--seed", seed, "training seed")->envname("CORMF_SEED");
  train_cmd->add_option("--out-dir", out_dir, "output directory")->required()->envname("CORMF_OUT_DIR");
  std::size_t train_eval = 100000;
  train_cmd->add_option("--eval-samples", train_eval, "fresh samples for the final estimate");
  add_train_flags(train_cmd, train_flags);

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "estimate F and magnetization of a checkpoint");
  std::string checkpoint_file;
  std::size_t eval_samples = 100000;
  eval_cmd->add_option("--checkpoint", checkpoint_file, "checkpoint file")->required();
  eval_cmd->add_option("--model", model_spec, "model file or catalog name")->required();
  eval_cmd->add_option("--samples", eval_samples, "sample count");
  eval_cmd->add_option("--seed", seed, "sampling seed")->envname("CORMF_SEED");
  eval_cmd->add_option("--out", out, "output file");

  // exact
  auto* exact_cmd = app.add_subcommand("exact", "exact log Z, F and magnetization by enumeration");
  exact_cmd->add_option("--model", model_spec, "model file or catalog name")->required();
  exact_cmd->add_option("--out", out, "output file");

  // bound
  auto* bound_cmd = app.add_subcommand("bound", "error bounds and gaps");
  std::optional<double> bound_cormf, bound_nmf;
  bound_cmd->add_option("--model", model_spec, "model file or catalog name")->required();
  bound_cmd->add_option("--cormf", bound_cormf, "recurrent model free energy");
  bound_cmd->add_option("--nmf", bound_nmf, "naive mean-field free energy");
  bound_cmd->add_option("--out", out, "output file");

  // gibbs
  auto* gibbs_cmd = app.add_subcommand("gibbs", "Gibbs reference samples");
  GibbsOptions gibbs_opts;
  gibbs_cmd->add_option("--model", model_spec, "model file or catalog name")->required();
  gibbs_cmd->add_option("--samples", gibbs_opts.samples, "retained samples");
  gibbs_cmd->add_option("--burn-in", gibbs_opts.burn_in, "discarded sweeps");
  gibbs_cmd->add_option("--thin", gibbs_opts.thin, "sweeps between retained samples");
  gibbs_cmd->add_option("--seed", seed, "chain seed")->envname("CORMF_SEED");
  gibbs_cmd->add_option("--out-dir", out_dir, "output directory")->required()->envname("CORMF_OUT_DIR");

  // nmf
  auto* nmf_cmd = app.add_subcommand("nmf", "naive mean-field baseline");
  int nmf_restarts = 10;
  long nmf_iterations = 10000;
  nmf_cmd->add_option("--model", model_spec, "model file or catalog name")->required();
  nmf_cmd->add_option("--repeats", nmf_restarts, "restarts");
  nmf_cmd->add_option("--iterations", nmf_iterations, "Adam iterations per restart")->envname("CORMF_ITERATIONS");
  nmf_cmd->add_option("--seed", seed, "seed")->envname("CORMF_SEED");
  nmf_cmd->add_option("--out", out, "output file");

  // table1
  auto* table_cmd = app.add_subcommand("table1", "compare orders, the naive baseline and references");
  std::vector<std::string> table_datasets{"ising_n10_beta1"};
  int repeats = 5;
  int table_nmf = 10;
  std::size_t table_gibbs = 100000;
  std::size_t table_eval = 100000;
  TrainFlags table_flags;
  table_cmd->add_option("--datasets", table_datasets, "catalog names or model files");
  table_cmd->add_option("--repeats", repeats, "training repeats per order")->envname("CORMF_REPEATS");
  table_cmd->add_option("--nmf-repeats", table_nmf, "naive mean-field restarts");
  table_cmd->add_option("--gibbs-samples", table_gibbs, "Gibbs reference samples (0 to skip)");
  table_cmd->add_option("--eval-samples", table_eval, "fresh samples per trained model");
  table_cmd->add_option("--seed", seed, "base seed")->envname("CORMF_SEED");
  table_cmd->add_option("--out-dir", out_dir, "output directory")->required()->envname("CORMF_OUT_DIR");
  add_train_flags(table_cmd, table_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << json{{"error", "usage"}, {"message", e.what()}}.dump() << '\n';
    return kUsage;
  }

  if (*gen) {
    manifest.command = "gen";
    if (gen_list) {
      json list = json::array();
      for (const auto& e : datasets::catalog())
        list.push_back({{"name", e.name}, {"description", e.description}, {"default_seed", e.default_seed}});
      std::cout << list.dump(2) << '\n';
      return kOk;
    }
    if (gen_name.empty()) throw ContractError("gen needs --name or --list");
    const auto model = gen_seed ? datasets::generate(gen_name, *gen_seed) : datasets::generate(gen_name);
    manifest.parameters = {{"name", gen_name}, {"seed", gen_seed ? json(*gen_seed) : json(nullptr)}};
    emit(manifest, out, io::model_to_json(model));
    if (!out.empty()) write_manifest(manifest, manifest_path_for(out));
    return kOk;
  }

  if (*order_cmd) {
    manifest.command = "order";
    const auto model = load_model(model_spec);
    const auto r = build_order(model, order_opts);
    manifest.parameters = {{"model", model_spec}, {"mode", order_opts.mode},
                           {"tie_break", order_opts.tie_break}, {"seed", order_opts.seed}};
    emit(manifest, out, io::order_to_json(r.order, order_opts.mode == "random" ? nullptr : &r.forest));
    if (!out.empty()) write_manifest(manifest, manifest_path_for(out));
    return kOk;
  }

  if (*train_cmd) {
    manifest.command = "train";
    const auto model = load_model(model_spec);
    train_order.seed = seed;
    const SpinOrder order = order_file.empty() ? build_order(model, train_order).order
                                               : io::order_from_json(io::read_json(order_file));
    const auto cfg = train_flags.config(seed);
    manifest.parameters = train_flags_json(train_flags);
    manifest.parameters["model"] = model_spec;
    manifest.parameters["order"] = order_file.empty() ? json(train_order.mode) : json(order_file);
    manifest.parameters["seed"] = seed;
    manifest.parameters["eval_samples"] = train_eval;

    const auto result = train(model, order, {.layers = train_flags.layers, .hidden = train_flags.hidden}, cfg);
    const fs::path dir(out_dir);
    emit(manifest, (dir / "checkpoint.json").string(),
         io::checkpoint_to_json(result.rnn, order, cfg, result.report.iterations_completed()));
    emit_text(manifest, dir / "history.csv", history_csv(result.report));
    emit_text(manifest, dir / "spin_means.csv", spin_means_csv(result.report));
    json summary = {{"F_final", result.report.final_free_energy()},
                    {"F_final_stderr", result.report.final_free_energy_stderr()},
                    {"F_best", result.report.best_free_energy},
                    {"best_iteration", result.report.best_iteration},
                    {"magnetization_final", result.report.final_magnetization()}};
    if (train_eval > 0) {
      const auto ev = evaluate(result.rnn, model, order, train_eval, derive_seed(seed, 0xe7a1));
      summary["F_eval"] = ev.free_energy.mean;
      summary["F_eval_stderr"] = ev.free_energy.std_error;
      summary["magnetization_eval"] = ev.magnetization.global;
      summary["magnetization_eval_stderr"] = ev.magnetization.std_error;
    }
    emit(manifest, (dir / "summary.json").string(), summary);
    write_manifest(manifest, dir / "manifest.json");
    std::cout << summary.dump(2) << '\n';
    return kOk;
  }

  if (*eval_cmd) {
    manifest.command = "eval";
    const auto model = load_model(model_spec);
    const auto ck = io::checkpoint_from_json(io::read_json(checkpoint_file));
    const auto ev = evaluate(ck.rnn, model, ck.order, eval_samples, seed);
    manifest.parameters = {{"checkpoint", checkpoint_file}, {"model", model_spec}, {"samples", eval_samples},
                           {"seed", seed}};
    emit(manifest, out,
         {{"F", ev.free_energy.mean},
          {"F_stderr", ev.free_energy.std_error},
          {"magnetization", ev.magnetization.global},
          {"magnetization_stderr", ev.magnetization.std_error},
          {"per_spin", ev.magnetization.per_spin}});
    if (!out.empty()) write_manifest(manifest, manifest_path_for(out));
    return kOk;
  }

  if (*exact_cmd) {
    manifest.command = "exact";
    const auto model = load_model(model_spec);
    const auto s = exact_summary(model);
    manifest.parameters = {{"model", model_spec}};
    emit(manifest, out,
         {{"log_Z", s.log_partition}, {"F", s.free_energy}, {"magnetization", s.magnetization},
          {"per_spin", s.per_spin}});
    if (!out.empty()) write_manifest(manifest, manifest_path_for(out));
    return kOk;
  }

  if (*bound_cmd) {
    manifest.command = "bound";
    const auto model = load_model(model_spec);
    manifest.parameters = {{"model", model_spec},
                           {"cormf", bound_cormf ? json(*bound_cormf) : json(nullptr)},
                           {"nmf", bound_nmf ? json(*bound_nmf) : json(nullptr)}};
    emit(manifest, out, io::bound_report_to_json(bound_report(model, bound_cormf, bound_nmf)));
    if (!out.empty()) write_manifest(manifest, manifest_path_for(out));
    return kOk;
  }

  if (*gibbs_cmd) {
    manifest.command = "gibbs";
    const auto model = load_model(model_spec);
    gibbs_opts.seed = seed;
    const auto samples = gibbs_sample(model, gibbs_opts);
    const auto m = magnetization(samples);
    manifest.parameters = {{"model", model_spec}, {"samples", gibbs_opts.samples}, {"burn_in", gibbs_opts.burn_in},
                           {"thin", gibbs_opts.thin}, {"seed", seed}};
    const fs::path dir(out_dir);
    std::ostringstream csv;
    io::write_samples_csv(csv, samples);
    emit_text(manifest, dir / "samples.csv", csv.str());
    const json summary = {{"magnetization", m.global}, {"magnetization_stderr", m.std_error},
                          {"per_spin", m.per_spin}};
    emit(manifest, (dir / "summary.json").string(), summary);
    write_manifest(manifest, dir / "manifest.json");
    std::cout << summary.dump(2) << '\n';
    return kOk;
  }

  if (*nmf_cmd) {
    manifest.command = "nmf";
    const auto model = load_model(model_spec);
    TrainConfig base;
    base.iterations = nmf_iterations;
    auto opt = NmfOptions::from(base, nmf_restarts);
    opt.seed = seed;
    manifest.parameters = {{"model", model_spec}, {"repeats", nmf_restarts}, {"iterations", nmf_iterations},
                           {"seed", seed}};
    emit(manifest, out, io::nmf_to_json(nmf_minimize(model, opt)));
    if (!out.empty()) write_manifest(manifest, manifest_path_for(out));
    return kOk;
  }

  if (*table_cmd) {
    manifest.command = "table1";
    manifest.parameters = train_flags_json(table_flags);
    manifest.parameters["datasets"] = table_datasets;
    manifest.parameters["repeats"] = repeats;
    manifest.parameters["nmf_repeats"] = table_nmf;
    manifest.parameters["gibbs_samples"] = table_gibbs;
    manifest.parameters["eval_samples"] = table_eval;
    manifest.parameters["seed"] = seed;
    const fs::path dir(out_dir);
    std::string text = "| dataset | method | F* | <x> |\n|---|---|---|---|\n";
    json all = json::array();

    for (const auto& name : table_datasets) {
      const auto model = load_model(name);
      std::vector<Row> rows;
      const std::vector<std::pair<std::string, std::string>> orders{
          {"CoRMF", "criticality"}, {"RO-CoRMF", "random"}, {"IO-CoRMF", "inverse"}};
      for (const auto& [label, mode] : orders) {
        Row row{label};
        for (int r = 0; r < repeats; ++r) {
          const std::uint64_t run_seed = derive_seed(seed, static_cast<std::uint64_t>(r));
          OrderOptions oo{mode, "index", run_seed};
          const auto order = build_order(model, oo).order;
          const auto result =
              train(model, order, {.layers = table_flags.layers, .hidden = table_flags.hidden},
                    table_flags.config(run_seed));
          double f = result.report.final_free_energy();
          double m = result.report.final_magnetization();
          if (table_eval > 0) {
            const auto ev = evaluate(result.rnn, model, order, table_eval, derive_seed(run_seed, 0xe7a1));
            f = ev.free_energy.mean;
            m = ev.magnetization.global;
          }
          row.free_energy.push_back(f);
          row.magnetization.push_back(m);
          std::cerr << name << ' ' << label << " repeat " << r << ": F " << fmt6(f) << " <x> " << fmt6(m) << '\n';
        }
        rows.push_back(std::move(row));
      }

      TrainConfig nmf_base;
      nmf_base.iterations = table_flags.iterations;
      auto nmf_opt = NmfOptions::from(nmf_base, table_nmf);
      nmf_opt.seed = seed;
      const auto nmf = nmf_minimize(model, nmf_opt);
      Row nmf_row{"NMF"};
      for (const auto& r : nmf.restarts) {
        nmf_row.free_energy.push_back(r.free_energy);
        nmf_row.magnetization.push_back(r.mean_values.mean());
      }
      rows.push_back(nmf_row);
      Row nmf_best{"NMF (best restart)"};
      nmf_best.fixed_free_energy = nmf.free_energy;
      nmf_best.fixed_magnetization = nmf.magnetization();
      rows.push_back(nmf_best);

      if (table_gibbs > 0) {
        GibbsOptions g;
        g.samples = table_gibbs;
        g.seed = derive_seed(seed, 0x6177);
        const auto m = magnetization(gibbs_sample(model, g));
        Row ref{"Reference (Gibbs)"};
        ref.fixed_magnetization = m.global;
        ref.magnetization_error = m.std_error;
        rows.push_back(ref);
      }
      if (model.n() <= 20) {
        const auto s = exact_summary(model);
        Row ex{"Exact"};
        ex.fixed_free_energy = s.free_energy;
        ex.fixed_magnetization = s.magnetization;
        rows.push_back(ex);
      }

      json ds = {{"dataset", name}, {"rows", json::array()}};
      for (const auto& r : rows) {
        ds["rows"].push_back(row_json(r));
        text += row_text(name, r);
      }
      all.push_back(ds);
    }
    emit(manifest, (dir / "table1.json").string(), all);
    emit_text(manifest, dir / "table1.md", text);
    write_manifest(manifest, dir / "manifest.json");
    std::cout << text;
    return kOk;
  }
  return kUsage;
}

int main(int argc, char** argv) {
  auto fail = [](const char* kind, const std::string& message, int code) {
    std::cerr << json{{"error", kind}, {"message", message}}.dump() << '\n';
    return code;
  };
  try {
    return run(argc, argv);
  } catch (const NumericAbort& e) {
    std::cerr << json{{"error", "numeric_abort"}, {"message", e.what()}, {"iteration", e.iteration()}}.dump() << '\n';
    return kNumeric;
  } catch (const GuardError& e) {
    std::cerr << json{{"error", "guard"}, {"message", e.what()}, {"limit", e.limit()}}.dump() << '\n';
    return kGuard;
  } catch (const ContractError& e) {
    return fail("invalid_input", e.what(), kUsage);
  } catch (const std::exception& e) {
    return fail("failure", e.what(), kUsage);
  }
}
