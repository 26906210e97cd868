// mfgp: command-line runner for the price-formation solver.
//
//   mfgp oracle  [--config F] [--out D] [--export csv,json,svg]
//   mfgp train   [--config F] [--mode det|stoch] [--steps N] [--seed N] [--resume CKPT] ...
//   mfgp eval    [--config F] [--mode det|stoch] [--checkpoint CKPT] [--samples N] ...
//   mfgp tabular [--config F] [--steps N] ...
//
// The output directory comes from --out, then [run] out, then $MFGP_OUT,
// then ./mfgp_out. Every CSV starts with a "# config_hash=... seed=..." line
// and every JSON carries the same two fields.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "mfgp/checkpoint.hpp"
#include "mfgp/config.hpp"
#include "mfgp/error.hpp"
#include "mfgp/format.hpp"
#include "mfgp/oracle.hpp"
#include "mfgp/simd/kernels.hpp"
#include "mfgp/training.hpp"
#include "plots.hpp"

#ifndef MFGP_VERSION
#define MFGP_VERSION "dev"
#endif

using namespace mfgp;
namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

struct Flags {
  std::string config;
  std::string mode;
  long steps = 0;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  std::string out;
  std::string exports;
  std::string checkpoint;
  std::string resume;
};

struct Run {
  RunConfig cfg;
  std::string hash;
  fs::path out;
};

Run prepare(const Flags& fl, const char* command) {
  Run r;
  r.cfg = fl.config.empty() ? parse_run_config("") : load_run_config(fl.config);
  RunConfig& c = r.cfg;
  if (!fl.mode.empty()) c.train.mode = parse_mode(fl.mode);
  if (fl.steps > 0) {
    if (std::string(command) == "tabular") c.tabular.steps = fl.steps;
    else c.train.steps = fl.steps;
  }
  if (fl.seed) {
    c.train.seed = *fl.seed;
    c.tabular.seed = *fl.seed;
    if (!c.eval_seed_explicit) c.eval.seed = *fl.seed;
  }
  if (fl.samples) c.eval.samples = *fl.samples;
  if (!fl.exports.empty()) c.exports = parse_exports(fl.exports);
  validate(c);

  if (!fl.out.empty()) r.out = fl.out;
  else if (!c.out_dir.empty()) r.out = c.out_dir;
  else if (const char* env = std::getenv("MFGP_OUT"); env && *env) r.out = env;
  else r.out = "mfgp_out";
  fs::create_directories(r.out);
  r.hash = config_hash(c);
  return r;
}

std::string header(const Run& r) {
  return "# config_hash=" + r.hash + " seed=" + std::to_string(r.cfg.train.seed) + "\n";
}

json meta(const Run& r, const char* command) {
  json j;
  j["command"] = command;
  j["version"] = MFGP_VERSION;
  j["config_hash"] = r.hash;
  j["seed"] = r.cfg.train.seed;
  j["simd"] = std::string(simd::backend_name(simd::active_backend()));
  return j;
}

json loss_json(const LossBreakdown& l) {
  return json{{"l_v", l.l_v}, {"l_0", l.l_0}, {"l_b", l.l_b}, {"l_m0", l.l_m0}, {"l_p", l.l_p}, {"total", l.total}};
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream f(p);
  if (!f) throw std::runtime_error("cannot open " + p.string() + " for writing");
  return f;
}

void finish(std::ofstream& f, const fs::path& p) {
  f.flush();
  if (!f) throw std::runtime_error("failed writing " + p.string());
  std::cout << "wrote " << p.string() << "\n";
}

void write_json(const fs::path& p, const json& j) {
  auto f = open_out(p);
  f << j.dump(2) << "\n";
  finish(f, p);
}

void write_run_files(const Run& r, const char* command) {
  const fs::path cfg = r.out / "config.cfg";
  auto f = open_out(cfg);
  f << header(r) << canonical_config(r.cfg);
  finish(f, cfg);
  write_json(r.out / "run.json", meta(r, command));
}

// "t,x,phi,m" over the interior grid; m is the forward space difference.
void write_field_csv(const Run& r, const fs::path& p, const PotentialField& field) {
  auto f = open_out(p);
  f << header(r) << "t,x,phi,m\n";
  const GridSpec& g = field.grid();
  for (std::size_t k = 0; k < g.n_t; ++k)
    for (std::size_t i = 0; i < g.n_x; ++i)
      f << fmt9(g.time(k)) << ',' << fmt9(g.space(i)) << ',' << fmt9(field.phi()(k, i)) << ','
        << fmt9(field.dx()(k, i)) << '\n';
  finish(f, p);
}

void write_price(const Run& r, const fs::path& p, const GridSpec& g, const PricePath& pred,
                 const PricePath& exact) {
  auto f = open_out(p);
  f << header(r);
  write_price_csv(f, g, pred, exact);
  finish(f, p);
}

std::vector<double> times(const GridSpec& g) {
  std::vector<double> t(g.n_t);
  for (std::size_t k = 0; k < g.n_t; ++k) t[k] = g.time(k);
  return t;
}

void price_svg(const fs::path& p, const std::string& title, const GridSpec& g, const PricePath& pred,
               const PricePath& exact) {
  plots::write_line_chart(p, title, times(g),
                          {{"predicted", pred.values, "#c0392b", false}, {"-Q", exact.values, "#2c3e50", true}},
                          "t", "price");
  std::cout << "wrote " << p.string() << "\n";
}

void density_svg(const fs::path& p, const PotentialField& field) {
  plots::write_heatmap(p, "density m = dphi/dx", field.grid(), field.dx());
  std::cout << "wrote " << p.string() << "\n";
}

SupplyPath mean_path(const RunConfig& c) {
  const TrainConfig& t = c.train;
  if (t.deterministic_supply == DeterministicSupply::euler) {
    SupplyParams s = t.supply;
    s.sigma = 0.0;
    auto rng = seeded_engine(t.seed, kTrainStream, 0);
    return sample_ou_path(s, t.grid, rng, OuScheme::euler);
  }
  return deterministic_supply(t.supply, t.grid);
}

int cmd_oracle(const Flags& fl) {
  const Run r = prepare(fl, "oracle");
  const RunConfig& c = r.cfg;
  json notes = json::array();
  if (c.train.supply.sigma > 0.0) {
    notes.push_back("sigma > 0 in config: oracle evaluated on the deterministic mean path");
    std::cerr << "warning: " << notes.back().get<std::string>() << "\n";
  }
  const SupplyPath path = deterministic_supply(c.train.supply, c.train.grid);
  const PotentialField field = analytic_potential_lq(c.train.grid, path, c.train.loss.density);
  const LossBreakdown l = loss_total(field, path, c.train.loss);
  const double continuum = lq_objective_continuum(c.train.supply, c.train.grid.t_hi - c.train.grid.t_lo);
  const PricePath exact = analytic_price(path, c.train.grid);
  const PricePath pred = extract_price(field, c.eval.mass_threshold);

  write_run_files(r, "oracle");
  if (c.exports.json) {
    json j = meta(r, "oracle");
    j["l_v_discrete"] = l.l_v;
    j["l_v_continuum"] = continuum;
    j["loss"] = loss_json(l);
    j["notes"] = notes;
    write_json(r.out / "oracle.json", j);
  }
  if (c.exports.csv) {
    write_field_csv(r, r.out / "field.csv", field);
    write_price(r, r.out / "price.csv", c.train.grid, pred, exact);
  }
  if (c.exports.svg) {
    price_svg(r.out / "price.svg", "analytic field: recovered price", c.train.grid, pred, exact);
    density_svg(r.out / "density.svg", field);
  }
  std::printf("l_v discrete %s, continuum %s\n", fmt9(l.l_v).c_str(), fmt9(continuum).c_str());
  return 0;
}

int cmd_train(const Flags& fl) {
  Run r = prepare(fl, "train");
  TrainConfig& t = r.cfg.train;
  if (t.checkpoint_every > 0) t.checkpoint_dir = r.out / "checkpoints";
  if (t.checkpoint_every > 0) fs::create_directories(t.checkpoint_dir);

  std::optional<Trainer> trainer;
  if (!fl.resume.empty()) trainer.emplace(t, load_checkpoint(fl.resume));
  else trainer.emplace(t);
  const long report = std::max(1L, t.steps / 20);
  while (!trainer->finished()) {
    const long before = trainer->steps_done();
    trainer->run(report);
    const auto& rec = trainer->history().records;
    if (!rec.empty() && trainer->steps_done() > before) {
      std::printf("step %ld/%ld total %s\n", trainer->steps_done(), t.steps, fmt9(rec.back().loss.total).c_str());
      std::fflush(stdout);
    }
  }

  write_run_files(r, "train");
  const fs::path ckpt = r.out / "model.ckpt";
  save_checkpoint(ckpt, trainer->checkpoint());
  std::cout << "wrote " << ckpt.string() << "\n";
  if (r.cfg.exports.csv) {
    const fs::path p = r.out / "history.csv";
    auto f = open_out(p);
    f << header(r);
    write_history_csv(f, trainer->history());
    finish(f, p);
  }
  if (r.cfg.exports.json) {
    json j = meta(r, "train");
    j["mode"] = t.mode == TrainMode::stochastic ? "stoch" : "det";
    j["steps"] = trainer->steps_done();
    if (!trainer->history().records.empty()) {
      j["last_logged_loss"] = loss_json(trainer->history().records.back().loss);
    }
    if (t.mode == TrainMode::deterministic) {
      const SupplyPath path = training_supply(t, 0);
      j["final_loss"] = loss_json(loss_total(forward_field(trainer->params(), t.grid, path), path, t.loss));
    }
    write_json(r.out / "train.json", j);
  }
  return 0;
}

int cmd_eval(const Flags& fl) {
  const Run r = prepare(fl, "eval");
  const RunConfig& c = r.cfg;
  const fs::path ckpt = fl.checkpoint.empty() ? r.out / "model.ckpt" : fs::path(fl.checkpoint);
  const Checkpoint model = load_checkpoint(ckpt);
  if (!(model.params.dims() == c.train.dims)) {
    throw ParameterError("checkpoint network dimensions differ from the configuration");
  }
  write_run_files(r, "eval");
  json j = meta(r, "eval");
  j["checkpoint"] = ckpt.string();
  j["checkpoint_step"] = model.step;

  if (c.train.mode == TrainMode::deterministic) {
    const SupplyPath path = mean_path(c);
    const PotentialField field = forward_field(model.params, c.train.grid, path);
    const PricePath pred = extract_price(field, c.eval.mass_threshold);
    const PricePath exact = analytic_price(path, c.train.grid);
    double max_err = 0.0;
    for (std::size_t k = 0; k < pred.values.size(); ++k)
      max_err = std::max(max_err, std::abs(pred.values[k] - exact.values[k]));
    j["mode"] = "det";
    j["max_abs_error"] = max_err;
    j["loss"] = loss_json(loss_total(field, path, c.train.loss));
    if (c.exports.csv) write_price(r, r.out / "price.csv", c.train.grid, pred, exact);
    if (c.exports.svg) {
      price_svg(r.out / "price.svg", "deterministic price", c.train.grid, pred, exact);
      density_svg(r.out / "density.svg", field);
    }
    std::printf("max abs price error %s\n", fmt9(max_err).c_str());
  } else {
    const EvalReport rep = evaluate_stochastic(model.params, c.train.supply, c.train.grid, c.train.loss, c.eval);
    j["mode"] = "stoch";
    j["mean"] = rep.mean;
    j["stddev"] = rep.stddev;
    j["max"] = rep.max;
    j["n"] = rep.count;
    j["eval_seed"] = rep.seed;
    j["failures"] = rep.failures;
    j["reference"] = c.eval.reference == PriceReference::half_step ? "half_step" : "grid";
    j["mean_loss"] = loss_json(rep.mean_loss);

    // Sample 0 goes to price.csv; svg plots cover the first ten samples.
    const std::size_t plotted = c.exports.svg ? std::min<std::size_t>(c.eval.samples, 10) : 0;
    for (std::size_t s = 0; s < std::max<std::size_t>(plotted, 1); ++s) {
      auto rng = seeded_engine(c.eval.seed, kTestStream, s);
      const SupplyPath path = sample_ou_path(c.train.supply, c.train.grid, rng, c.eval.scheme);
      const PotentialField field = forward_field(model.params, c.train.grid, path);
      PricePath pred;
      try {
        pred = extract_price(field, c.eval.mass_threshold);
      } catch (const DegenerateDensity&) {
        pred.values.assign(c.train.grid.n_t, std::nan(""));
      }
      const PricePath exact = analytic_price(path, c.train.grid);
      if (s == 0 && c.exports.csv) write_price(r, r.out / "price.csv", c.train.grid, pred, exact);
      if (s < plotted) {
        price_svg(r.out / ("price_sample_" + std::to_string(s) + ".svg"),
                  "stochastic price, sample " + std::to_string(s), c.train.grid, pred, exact);
      }
    }
    if (c.exports.csv) {
      const fs::path p = r.out / "errors.csv";
      auto f = open_out(p);
      f << header(r) << "sample,linf_error\n";
      for (std::size_t s = 0; s < rep.errors.size(); ++s) f << s << ',' << fmt9(rep.errors[s]) << '\n';
      finish(f, p);
    }
    std::printf("mean L-inf price error %s over %zu samples (%zu failures)\n", fmt9(rep.mean).c_str(),
                rep.count, rep.failures);
  }
  if (c.exports.json) write_json(r.out / "report.json", j);
  return 0;
}

int cmd_tabular(const Flags& fl) {
  const Run r = prepare(fl, "tabular");
  const RunConfig& c = r.cfg;
  const SupplyPath path = mean_path(c);
  const TabularResult res = tabular_solve(c.train.grid, path, c.train.loss, c.tabular);
  const PricePath pred = extract_price(res.field, c.eval.mass_threshold);
  const PricePath exact = analytic_price(path, c.train.grid);

  write_run_files(r, "tabular");
  if (c.exports.csv) {
    write_field_csv(r, r.out / "field.csv", res.field);
    write_price(r, r.out / "price.csv", c.train.grid, pred, exact);
    const fs::path p = r.out / "loss.csv";
    auto f = open_out(p);
    f << header(r);
    write_loss_csv_header(f);
    f << '\n';
    write_loss_csv_row(f, 0, res.initial);
    f << '\n';
    write_loss_csv_row(f, res.best_step, res.best);
    f << '\n';
    finish(f, p);
  }
  if (c.exports.json) {
    json j = meta(r, "tabular");
    j["steps"] = c.tabular.steps;
    j["best_step"] = res.best_step;
    j["initial"] = loss_json(res.initial);
    j["best"] = loss_json(res.best);
    write_json(r.out / "tabular.json", j);
  }
  if (c.exports.svg) {
    price_svg(r.out / "price.svg", "tabular solution: recovered price", c.train.grid, pred, exact);
    density_svg(r.out / "density.svg", res.field);
  }
  std::printf("best total %s (l_v %s) at step %ld\n", fmt9(res.best.total).c_str(),
              fmt9(res.best.l_v).c_str(), res.best_step);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mean-field price formation: oracle, training, evaluation"};
  app.set_version_flag("--version", MFGP_VERSION);
  app.require_subcommand(1);
  Flags fl;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", fl.config, "sectioned key = value config file")->check(CLI::ExistingFile);
    sub->add_option("--out", fl.out, "output directory (default: [run] out, $MFGP_OUT, ./mfgp_out)");
    sub->add_option("--export", fl.exports, "comma list of csv, json, svg");
    sub->add_option("--seed", fl.seed, "run seed");
  };
  auto* oracle = app.add_subcommand("oracle", "analytic benchmark field, price, and objective values");
  common(oracle);
  auto* train = app.add_subcommand("train", "train the recurrent potential network");
  common(train);
  train->add_option("--mode", fl.mode, "det or stoch")->check(CLI::IsMember({"det", "stoch", "deterministic", "stochastic"}));
  train->add_option("--steps", fl.steps, "training steps")->check(CLI::PositiveNumber);
  train->add_option("--resume", fl.resume, "continue from a checkpoint")->check(CLI::ExistingFile);
  auto* eval = app.add_subcommand("eval", "evaluate a trained checkpoint");
  common(eval);
  eval->add_option("--mode", fl.mode, "det or stoch")->check(CLI::IsMember({"det", "stoch", "deterministic", "stochastic"}));
  eval->add_option("--samples", fl.samples, "test paths (stoch)")->check(CLI::PositiveNumber);
  eval->add_option("--checkpoint", fl.checkpoint, "model checkpoint (default: <out>/model.ckpt)");
  auto* tab = app.add_subcommand("tabular", "optimize the objective directly over grid values");
  common(tab);
  tab->add_option("--steps", fl.steps, "optimizer steps")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*oracle) return cmd_oracle(fl);
    if (*train) return cmd_train(fl);
    if (*eval) return cmd_eval(fl);
    if (*tab) return cmd_tabular(fl);
  } catch (const ParameterError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const DivergenceError& e) {
    std::cerr << "error: " << e.what() << " (step " << e.step() << ")\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
