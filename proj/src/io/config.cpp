#include "mfgp/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "mfgp/error.hpp"
#include "mfgp/format.hpp"
#include "mfgp/hash.hpp"

namespace mfgp {
namespace {

namespace pt = boost::property_tree;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double to_double(const std::string& key, std::string_view v) {
  v = trim(v);
  double out = 0.0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) {
    throw ParameterError("config key '" + key + "': expected a number, got '" + std::string(v) + "'");
  }
  return out;
}

std::uint64_t to_u64(const std::string& key, std::string_view v) {
  v = trim(v);
  std::uint64_t out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) {
    throw ParameterError("config key '" + key + "': expected a nonnegative integer, got '" +
                         std::string(v) + "'");
  }
  return out;
}

LrSchedule parse_schedule(const std::string& key, std::string_view v) {
  v = trim(v);
  if (v == "constant") return LrSchedule::constant;
  if (v == "cosine") return LrSchedule::cosine;
  throw ParameterError("config key '" + key + "': expected constant|cosine");
}

const char* schedule_name(LrSchedule s) { return s == LrSchedule::cosine ? "cosine" : "constant"; }

long to_long(const std::string& key, std::string_view v) {
  v = trim(v);
  long out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) {
    throw ParameterError("config key '" + key + "': expected an integer, got '" + std::string(v) + "'");
  }
  return out;
}

struct GridKeys {
  double T = 1.0;
  std::size_t n_t = 17;
  double x_lo = -1.0;
  double x_hi = 1.0;
  std::size_t n_x = 31;
};

using Setter = void (*)(RunConfig&, GridKeys&, const std::string&, const std::string&);

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"run.mode", [](RunConfig& c, GridKeys&, const std::string&, const std::string& v) { c.train.mode = parse_mode(trim(v)); }},
      {"run.steps", [](RunConfig& c, GridKeys&, const std::string& k, const std::string& v) { c.train.steps = to_long(k, v); }},
      {"run.seed", [](RunConfig& c, GridKeys&, const std::string& k, const std::string& v) { c.train.seed = to_u64(k, v); }},
      {"run.log_every", [](RunConfig& c, GridKeys&, const std::string& k, const std::string& v) { c.train.log_every = to_long(k, v); }},
      {"run.checkpoint_every", [](RunConfig& c, GridKeys&, const std::string& k, const std::string& v) { c.train.checkpoint_every = to_long(k, v); }},
      {"run.batch", [](RunConfig& c, GridKeys&, const std::string& k, const std::string& v) { c.train.batch = to_u64(k, v); }},
      {"run.out", [](RunConfig& c, GridKeys&, const std::string&, const std::string& v) { c.out_dir = std::string(trim(v)); }},
      {"run.export", [](RunConfig& c, GridKeys&, const std::string&, const std::string& v) { c.exports = parse_exports(v); }},
      {"grid.T", [](RunConfig&, GridKeys& g, const std::string& k, const std::string& v) { g.T = to_double(k, v); }},
      {"grid.n_t", [](RunConfig&, GridKeys& g, const std::string& k, const std::string& v) { g.n_t = to_u64(k, v); }},
      {"grid.x_lo", [](RunConfig&, GridKeys& g, const std::string& k, const std::string& v) { g.x_lo = to_double(k, v); }},
      {"grid.x_hi", [](RunConfig&, GridKeys& g, const std::string& k, const std::string& v) { g.x_hi = to_double(k, v); }},
      {"grid.n_x", [](RunConfig&, GridKeys& g, const std::string& k, const std::string& v) { g.n_x = to_u64(k, v); }},
      {"supply.theta", [](RunConfig& c, GridKeys&, const std::string& k, const std::string& v) { c.train.supply.theta = to_double(k, v); }},
      {"supply.q_bar", [](RunConfig& c, GridKeys&, const std::string& k, const std::string& v) { c.train.supply.q_bar = to_double(k, v); }},
      {"supply.sigma", [](RunConfig& c, GridKeys&, const std::string& k, const std::string& v) { c.train.supply.sigma = to_double(k, v); }},
      {"supply.q0", [](RunConfig& c, GridKeys&, const std::string& k, const std::string& v) { c.train.supply.q0 = to_double(k, v); }},
      {"supply.scheme", [](RunConfig& c, GridKeys&, const std::string& k, const std::string& v) {
         const auto s = trim(v);
         if (s == "euler") c.train.scheme = OuScheme::euler;
         else if (s == "exact") c.train.scheme = OuScheme::exact;
         else throw ParameterError("config key '" + k + "': expected euler|exact");
         c.eval.scheme = c.train.scheme;
       }},
      {"supply.deterministic", [](RunConfig& c, GridKeys&, const std::string& k, const std::string& v) {
         const auto s = trim(v);
         if (s == "closed_form") c.train.deterministic_supply = DeterministicSupply::closed_form;
         else if (s == "euler") c.train.deterministic_supply = DeterministicSupply::euler;
         else throw ParameterError("config key '" + k + "': expected closed_form|euler");
       }},
      {"density.center", [](RunConfig& c, GridKeys&, const std::string& k, const std::string& v) { c.train.loss.density.center = to_double(k, v); }},
      {"density.half_width", [](RunConfig& c, GridKeys&, const std::string& k, const std::string& v) { c.train.loss.density.half_width = to_double(k, v); }},
      {"net.d_h", [](RunConfig& c, GridKeys&, const std::string& k, const std::string& v) { c.train.dims.d_h = to_u64(k, v); }},
      {"net.d_1", [](RunConfig& c, GridKeys&, const std::string& k, const std::string& v) { c.train.dims.d_1 = to_u64(k, v); }},
      {"net.d_2", [](RunConfig& c, GridKeys&, const std::string& k, const std::string& v) { c.train.dims.d_2 = to_u64(k, v); }},
      {"adam.lr", [](RunConfig& c, GridKeys&, const std::string& k, const std::string& v) { c.train.adam.learning_rate = to_double(k, v); }},
      {"adam.beta1", [](RunConfig& c, GridKeys&, const std::string& k, const std::string& v) { c.train.adam.beta1 = to_double(k, v); }},
      {"adam.beta2", [](RunConfig& c, GridKeys&, const std::string& k, const std::string& v) { c.train.adam.beta2 = to_double(k, v); }},
      {"adam.eps", [](RunConfig& c, GridKeys&, const std::string& k, const std::string& v) { c.train.adam.eps = to_double(k, v); }},
      {"adam.schedule", [](RunConfig& c, GridKeys&, const std::string& k, const std::string& v) {
         c.train.schedule = parse_schedule(k, v);
       }},
      {"adam.min_lr", [](RunConfig& c, GridKeys&, const std::string& k, const std::string& v) { c.train.min_learning_rate = to_double(k, v); }},
      {"loss.eps", [](RunConfig& c, GridKeys&, const std::string& k, const std::string& v) { c.train.loss.eps = to_double(k, v); }},
      {"loss.w_v", [](RunConfig& c, GridKeys&, const std::string& k, const std::string& v) { c.train.loss.weights.v = to_double(k, v); }},
      {"loss.w_0", [](RunConfig& c, GridKeys&, const std::string& k, const std::string& v) { c.train.loss.weights.zero = to_double(k, v); }},
      {"loss.w_b", [](RunConfig& c, GridKeys&, const std::string& k, const std::string& v) { c.train.loss.weights.balance = to_double(k, v); }},
      {"loss.w_m0", [](RunConfig& c, GridKeys&, const std::string& k, const std::string& v) { c.train.loss.weights.initial = to_double(k, v); }},
      {"loss.w_p", [](RunConfig& c, GridKeys&, const std::string& k, const std::string& v) { c.train.loss.weights.probability = to_double(k, v); }},
      {"eval.samples", [](RunConfig& c, GridKeys&, const std::string& k, const std::string& v) { c.eval.samples = to_u64(k, v); }},
      {"eval.seed", [](RunConfig& c, GridKeys&, const std::string& k, const std::string& v) { c.eval.seed = to_u64(k, v); }},
      {"eval.mass_threshold", [](RunConfig& c, GridKeys&, const std::string& k, const std::string& v) { c.eval.mass_threshold = to_double(k, v); }},
      {"eval.reference", [](RunConfig& c, GridKeys&, const std::string& k, const std::string& v) {
         const auto s = trim(v);
         if (s == "grid") c.eval.reference = PriceReference::grid;
         else if (s == "half_step") c.eval.reference = PriceReference::half_step;
         else throw ParameterError("config key '" + k + "': expected grid|half_step");
       }},
      {"tabular.steps", [](RunConfig& c, GridKeys&, const std::string& k, const std::string& v) { c.tabular.steps = to_long(k, v); }},
      {"tabular.lr", [](RunConfig& c, GridKeys&, const std::string& k, const std::string& v) { c.tabular.learning_rate = to_double(k, v); }},
      {"tabular.min_lr", [](RunConfig& c, GridKeys&, const std::string& k, const std::string& v) { c.tabular.min_learning_rate = to_double(k, v); }},
      {"tabular.schedule", [](RunConfig& c, GridKeys&, const std::string& k, const std::string& v) {
         c.tabular.schedule = parse_schedule(k, v);
       }},
  };
  return table;
}

const char* mode_name(TrainMode m) { return m == TrainMode::stochastic ? "stoch" : "det"; }

}  // namespace

TrainMode parse_mode(std::string_view s) {
  if (s == "det" || s == "deterministic") return TrainMode::deterministic;
  if (s == "stoch" || s == "stochastic") return TrainMode::stochastic;
  throw ParameterError("mode must be det or stoch, got '" + std::string(s) + "'");
}

ExportToggles parse_exports(std::string_view list) {
  ExportToggles t{false, false, false};
  while (!list.empty()) {
    const auto comma = list.find(',');
    const auto item = trim(list.substr(0, comma));
    if (item == "csv") t.csv = true;
    else if (item == "json") t.json = true;
    else if (item == "svg") t.svg = true;
    else if (!item.empty()) throw ParameterError("unknown export kind '" + std::string(item) + "'");
    if (comma == std::string_view::npos) break;
    list.remove_prefix(comma + 1);
  }
  return t;
}

RunConfig parse_run_config(std::string_view text) {
  pt::ptree tree;
  std::istringstream in{std::string(text)};
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ParameterError(std::string("config syntax error: ") + e.message() + " (line " +
                         std::to_string(e.line()) + ")");
  }
  RunConfig c;
  GridKeys g;
  bool eval_seed_set = false;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) {
      throw ParameterError("config key '" + section + "' must live inside a [section]");
    }
    for (const auto& [key, value] : body) {
      const std::string full = section + "." + key;
      const auto it = setters().find(full);
      if (it == setters().end()) throw ParameterError("unknown config key '" + full + "'");
      it->second(c, g, full, value.data());
      if (full == "eval.seed") eval_seed_set = true;
    }
  }
  c.train.grid = build_grid(g.T, g.n_t, g.x_lo, g.x_hi, g.n_x);
  c.eval_seed_explicit = eval_seed_set;
  if (!eval_seed_set) c.eval.seed = c.train.seed;
  validate(c);
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str());
}

void validate(const RunConfig& c) {
  validate(c.train);
  if (!(c.eval.mass_threshold > 0.0)) throw ParameterError("eval mass_threshold must be positive");
  if (c.tabular.steps < 1) throw ParameterError("tabular steps must be at least 1");
  if (!(c.tabular.learning_rate > 0.0)) throw ParameterError("tabular lr must be positive");
}

std::string canonical_config(const RunConfig& c) {
  const TrainConfig& t = c.train;
  std::ostringstream o;
  o << "[run]\nmode = " << mode_name(t.mode) << "\nsteps = " << t.steps << "\nseed = " << t.seed
    << "\nlog_every = " << t.log_every << "\ncheckpoint_every = " << t.checkpoint_every
    << "\nbatch = " << t.batch << "\n";
  o << "[grid]\nT = " << fmt9(t.grid.t_hi) << "\nn_t = " << t.grid.n_t << "\nx_lo = " << fmt9(t.grid.x_lo)
    << "\nx_hi = " << fmt9(t.grid.x_hi) << "\nn_x = " << t.grid.n_x << "\n";
  o << "[supply]\ntheta = " << fmt9(t.supply.theta) << "\nq_bar = " << fmt9(t.supply.q_bar)
    << "\nsigma = " << fmt9(t.supply.sigma) << "\nq0 = " << fmt9(t.supply.q0)
    << "\nscheme = " << (t.scheme == OuScheme::exact ? "exact" : "euler") << "\ndeterministic = "
    << (t.deterministic_supply == DeterministicSupply::euler ? "euler" : "closed_form") << "\n";
  o << "[density]\ncenter = " << fmt9(t.loss.density.center)
    << "\nhalf_width = " << fmt9(t.loss.density.half_width) << "\n";
  o << "[net]\nd_h = " << t.dims.d_h << "\nd_1 = " << t.dims.d_1 << "\nd_2 = " << t.dims.d_2 << "\n";
  o << "[adam]\nlr = " << fmt9(t.adam.learning_rate) << "\nbeta1 = " << fmt9(t.adam.beta1)
    << "\nbeta2 = " << fmt9(t.adam.beta2) << "\neps = " << fmt9(t.adam.eps)
    << "\nschedule = " << schedule_name(t.schedule) << "\nmin_lr = " << fmt9(t.min_learning_rate) << "\n";
  o << "[loss]\neps = " << fmt9(t.loss.eps) << "\nw_v = " << fmt9(t.loss.weights.v)
    << "\nw_0 = " << fmt9(t.loss.weights.zero) << "\nw_b = " << fmt9(t.loss.weights.balance)
    << "\nw_m0 = " << fmt9(t.loss.weights.initial) << "\nw_p = " << fmt9(t.loss.weights.probability) << "\n";
  o << "[eval]\nsamples = " << c.eval.samples << "\nseed = " << c.eval.seed
    << "\nmass_threshold = " << fmt9(c.eval.mass_threshold) << "\nreference = "
    << (c.eval.reference == PriceReference::half_step ? "half_step" : "grid") << "\n";
  o << "[tabular]\nsteps = " << c.tabular.steps << "\nlr = " << fmt9(c.tabular.learning_rate)
    << "\nmin_lr = " << fmt9(c.tabular.min_learning_rate)
    << "\nschedule = " << schedule_name(c.tabular.schedule) << "\n";
  return o.str();
}

std::string config_hash(const RunConfig& c) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(canonical_config(c))));
  return buf;
}

}  // namespace mfgp
