#include "qcqkd/catalysis.hpp"
#include "qcqkd/cli.hpp"
#include "qcqkd/keyrate.hpp"
#include "qcqkd/optimize.hpp"
#include "qcqkd/oracle.hpp"
#include "qcqkd/parallel.hpp"
#include "qcqkd/subtraction.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace qcqkd::cli {

namespace {

constexpr double kOptimalTMin = 0.5;
constexpr double kOptimalGridStep = 0.005;
constexpr double kOptimalTolerance = 1e-4;

struct TSelection {
  bool optimal = false;
  std::vector<double> values;
};

TSelection resolve_t(const RunConfig& cfg, TSelection fallback) {
  if (!cfg.t) return fallback;
  if (*cfg.t == "optimal") return {true, {}};
  TSelection sel;
  std::stringstream ss(*cfg.t);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) {
      throw UsageError(fmt::format("--t expects 'optimal' or numbers, got '{}'", item));
    }
    if (!(v > 0.0 && v <= 1.0)) {
      throw UsageError(fmt::format("transmittance {} outside (0, 1]", v));
    }
    sel.values.push_back(v);
  }
  if (sel.values.empty()) throw UsageError("--t is empty");
  return sel;
}

SchemeFamily parse_family(const std::string& name) {
  if (name == "bsqc") return SchemeFamily::bsqc;
  if (name == "ssqc") return SchemeFamily::ssqc;
  if (name == "subtraction") return SchemeFamily::subtraction;
  if (name == "original") return SchemeFamily::original;
  throw UsageError(fmt::format(
      "unknown scheme '{}' (expected bsqc|ssqc|subtraction|original)", name));
}

bool is_catalysis(SchemeFamily f) {
  return f == SchemeFamily::bsqc || f == SchemeFamily::ssqc;
}

std::vector<TunableScheme> catalysis_set(std::initializer_list<int> photons,
                                         bool with_original,
                                         bool with_subtraction) {
  std::vector<TunableScheme> out;
  if (with_original) out.push_back({SchemeFamily::original, 0});
  for (const int k : photons) out.push_back({SchemeFamily::bsqc, k});
  for (const int k : photons) out.push_back({SchemeFamily::ssqc, k});
  if (with_subtraction) out.push_back({SchemeFamily::subtraction, 0});
  return out;
}

// Applies --scheme/--m/--n on top of a command's default scheme list.
std::vector<TunableScheme> select_schemes(const RunConfig& cfg,
                                          const std::vector<TunableScheme>& defaults) {
  if (cfg.m && cfg.n && *cfg.m != *cfg.n) {
    const bool ssqc_ok = cfg.scheme == "ssqc" && *cfg.m == 0;
    if (!ssqc_ok) {
      throw UsageError(
          "--m and --n differ: bsqc uses m = n and ssqc takes --n only");
    }
  }
  std::optional<int> photons = cfg.n ? cfg.n : cfg.m;
  if (cfg.scheme == "ssqc" && cfg.m && *cfg.m != 0 && !cfg.n) {
    throw UsageError("ssqc catalyzes mode B only; use --n");
  }
  if (photons && (*photons < 0 || *photons > kMaxCatalysisPhotons)) {
    throw UsageError(fmt::format("photon number must lie in [0, {}]",
                                 kMaxCatalysisPhotons));
  }

  if (!cfg.scheme) {
    if (!photons) return defaults;
    std::vector<TunableScheme> out;
    for (const auto& s : defaults) {
      if (is_catalysis(s.family) && s.photons == *photons) out.push_back(s);
    }
    if (out.empty()) {
      out = {{SchemeFamily::bsqc, *photons}, {SchemeFamily::ssqc, *photons}};
    }
    return out;
  }

  const SchemeFamily family = parse_family(*cfg.scheme);
  if (!is_catalysis(family)) return {{family, 0}};
  if (photons) return {{family, *photons}};
  std::vector<TunableScheme> out;
  for (const auto& s : defaults) {
    if (s.family == family) out.push_back(s);
  }
  if (out.empty()) out.push_back({family, 0});
  return out;
}

std::string family_label(const TunableScheme& s) {
  switch (s.family) {
    case SchemeFamily::original:
      return "original";
    case SchemeFamily::bsqc:
      return "bsqc";
    case SchemeFamily::ssqc:
      return "ssqc";
    case SchemeFamily::subtraction:
      return "subtraction";
  }
  return "unknown";
}

long long m_of(const TunableScheme& s) {
  return s.family == SchemeFamily::bsqc ? s.photons : 0;
}
long long n_of(const TunableScheme& s) {
  return is_catalysis(s.family) ? s.photons : 0;
}

std::vector<double> uniform_grid(double lo, double hi, double step,
                                 const char* what) {
  if (!(step > 0.0) || !(hi >= lo)) {
    throw UsageError(fmt::format("invalid {} grid [{}, {}] step {}", what, lo, hi, step));
  }
  const auto count = static_cast<long long>(std::floor((hi - lo) / step + 1e-9));
  std::vector<double> grid;
  for (long long i = 0; i <= count; ++i) grid.push_back(lo + static_cast<double>(i) * step);
  return grid;
}

std::vector<SourceParams> alpha_grid(const RunConfig& cfg) {
  if (cfg.alpha || cfg.variance) return {cfg.source()};
  std::vector<SourceParams> out;
  for (const double a : uniform_grid(cfg.alpha_min, cfg.alpha_max, cfg.alpha_step, "alpha")) {
    out.push_back(SourceParams::from_alpha(a));
  }
  return out;
}

std::vector<double> distance_grid(const RunConfig& cfg) {
  if (cfg.d_min < 0.0) throw UsageError("--d-min must be >= 0");
  return uniform_grid(cfg.d_min, cfg.d_max, cfg.d_step, "distance");
}

TransmittanceSearch search_for(const TSelection& sel, double fixed_t) {
  if (sel.optimal) return {kOptimalTMin, 1.0, kOptimalGridStep, kOptimalTolerance};
  return {fixed_t, fixed_t, kOptimalGridStep, kOptimalTolerance};
}

// (scheme, T) pairs to evaluate; T is NaN for optimal mode and 1 for the
// original protocol.
std::vector<std::pair<TunableScheme, double>> expand(
    const std::vector<TunableScheme>& schemes, const TSelection& sel) {
  std::vector<std::pair<TunableScheme, double>> out;
  for (const auto& s : schemes) {
    if (!s.has_transmittance()) {
      out.emplace_back(s, 1.0);
    } else if (sel.optimal) {
      out.emplace_back(s, std::numeric_limits<double>::quiet_NaN());
    } else {
      for (const double t : sel.values) {
        if (s.family == SchemeFamily::subtraction && t >= 1.0) {
          throw UsageError("subtraction needs T < 1");
        }
        out.emplace_back(s, t);
      }
    }
  }
  return out;
}

Table make_table(const RunConfig& cfg, std::vector<std::string> columns) {
  Table table;
  table.columns = std::move(columns);
  table.metadata = cfg.echo();
  return table;
}

struct EntanglementPoint {
  double t = 1.0;
  double pd = 1.0;
  double e_n = 0.0;
};

EntanglementPoint entanglement_at(const TunableScheme& s,
                                  const SourceParams& src, double t) {
  switch (s.family) {
    case SchemeFamily::original:
      return {1.0, 1.0, log_negativity_tmsv(src)};
    case SchemeFamily::subtraction: {
      const SubtractionConfig c{t};
      return {t, ss_success_probability(c, src), ss_log_negativity(c, src)};
    }
    default: {
      const auto c = std::get<CatalysisConfig>(s.at(t));
      const auto spectrum = schmidt_spectrum(c, src);
      return {t, success_probability(c, src), log_negativity(spectrum)};
    }
  }
}

}  // namespace

SourceParams RunConfig::source() const {
  if (alpha && variance) {
    throw UsageError("--alpha and --variance are mutually exclusive");
  }
  if (alpha) return SourceParams::from_alpha(*alpha);
  if (variance) return SourceParams::from_variance(*variance);
  return SourceParams::from_variance(20.0);
}

std::map<std::string, std::string> RunConfig::echo() const {
  std::map<std::string, std::string> meta;
  auto opt = [](const auto& o) {
    return o ? fmt::format("{}", *o) : std::string("default");
  };
  meta["command"] = command;
  meta["scheme"] = scheme.value_or("default");
  meta["m"] = opt(m);
  meta["n"] = opt(n);
  meta["alpha"] = opt(alpha);
  meta["variance"] = opt(variance);
  meta["beta"] = fmt::format("{}", beta);
  meta["epsilon"] = fmt::format("{}", epsilon);
  meta["atten_db_km"] = fmt::format("{}", atten_db_km);
  meta["t"] = t.value_or("default");
  meta["d_min"] = fmt::format("{}", d_min);
  meta["d_max"] = fmt::format("{}", d_max);
  meta["d_step"] = fmt::format("{}", d_step);
  meta["alpha_min"] = fmt::format("{}", alpha_min);
  meta["alpha_max"] = fmt::format("{}", alpha_max);
  meta["alpha_step"] = fmt::format("{}", alpha_step);
  meta["floor"] = fmt::format("{}", floor);
  meta["format"] = format;
  meta["seed"] = fmt::format("{}", seed);
  meta["samples"] = fmt::format("{}", samples);
  meta["cutoff"] = opt(cutoff);
  meta["flip_bs_sign"] = flip_bs_sign ? "true" : "false";
  meta["tolerance"] = fmt::format("{}", tolerance);
  return meta;
}

Table cmd_success_prob(const RunConfig& cfg) {
  const auto sel = resolve_t(cfg, {false, {0.95}});
  if (sel.optimal) throw UsageError("success-prob needs fixed transmittances");
  const auto schemes = select_schemes(cfg, catalysis_set({0, 1, 2}, false, false));
  const auto sources = alpha_grid(cfg);

  struct Job {
    TunableScheme scheme;
    double t;
    SourceParams src;
  };
  std::vector<Job> jobs;
  for (const auto& [s, t] : expand(schemes, sel)) {
    for (const auto& src : sources) jobs.push_back({s, t, src});
  }
  const auto pds = parallel_map(jobs.size(), [&](std::size_t i) {
    const auto& job = jobs[i];
    switch (job.scheme.family) {
      case SchemeFamily::original:
        return 1.0;
      case SchemeFamily::subtraction:
        return ss_success_probability(SubtractionConfig{job.t}, job.src);
      default:
        return success_probability(std::get<CatalysisConfig>(job.scheme.at(job.t)),
                                   job.src);
    }
  });

  auto table = make_table(cfg, {"alpha", "scheme", "m", "n", "T", "pd"});
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const auto& job = jobs[i];
    table.add_row({job.src.alpha(), family_label(job.scheme), m_of(job.scheme),
                   n_of(job.scheme), job.t, pds[i]});
  }
  return table;
}

Table cmd_entanglement(const RunConfig& cfg) {
  const auto sel = resolve_t(cfg, {false, {0.95}});
  const auto defaults = sel.optimal ? catalysis_set({0, 1}, false, false)
                                    : catalysis_set({0, 1, 2}, false, false);
  const auto schemes = select_schemes(cfg, defaults);
  const auto sources = alpha_grid(cfg);

  struct Job {
    TunableScheme scheme;
    double t;
    SourceParams src;
  };
  std::vector<Job> jobs;
  for (const auto& [s, t] : expand(schemes, sel)) {
    for (const auto& src : sources) jobs.push_back({s, t, src});
  }
  const auto points = parallel_map(jobs.size(), [&](std::size_t i) {
    const auto& job = jobs[i];
    if (!std::isnan(job.t)) return entanglement_at(job.scheme, job.src, job.t);
    const auto best = maximize_on_interval(
        [&](double t) { return entanglement_at(job.scheme, job.src, t).e_n; },
        kOptimalTMin, job.scheme.max_transmittance(), kOptimalGridStep,
        kOptimalTolerance);
    return entanglement_at(job.scheme, job.src, best.x);
  });

  auto table = make_table(cfg, {"alpha", "scheme", "m", "n", "T", "pd", "e_n",
                                "e_n_tmsv", "e_n_tmsv_closed_form"});
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const auto& job = jobs[i];
    const auto& p = points[i];
    table.add_row({job.src.alpha(), family_label(job.scheme), m_of(job.scheme),
                   n_of(job.scheme), p.t, p.pd, p.e_n,
                   log_negativity_tmsv(job.src),
                   log_negativity_tmsv_closed_form(job.src)});
  }
  return table;
}

Table cmd_keyrate(const RunConfig& cfg) {
  const auto sel = resolve_t(cfg, {false, {0.95}});
  const auto defaults = sel.optimal ? catalysis_set({0, 1}, true, true)
                                    : catalysis_set({0, 1, 2}, true, false);
  const auto schemes = select_schemes(cfg, defaults);
  const auto distances = distance_grid(cfg);
  const auto src = cfg.source();

  struct Job {
    TunableScheme scheme;
    double t;
    double distance;
  };
  std::vector<Job> jobs;
  for (const auto& [s, t] : expand(schemes, sel)) {
    for (const double d : distances) jobs.push_back({s, t, d});
  }
  struct Row {
    double t;
    KeyRateResult rate;
  };
  const auto rows = parallel_map(jobs.size(), [&](std::size_t i) {
    const auto& job = jobs[i];
    const TunableProtocol proto{job.scheme, cfg.beta, src};
    const auto ch =
        ChannelParams::from_distance(job.distance, cfg.epsilon, cfg.atten_db_km);
    const auto best = optimize_transmittance(proto, ch, search_for(sel, job.t));
    return Row{best.t_opt, secret_key_rate(proto.at(best.t_opt), ch)};
  });

  auto table = make_table(cfg, {"distance_km", "tc", "scheme", "m", "n", "T",
                                "p_success", "i_ab", "holevo", "key_rate", "plob"});
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const auto& job = jobs[i];
    const double tc = channel_transmittance(job.distance, cfg.atten_db_km);
    const double plob =
        tc < 1.0 ? plob_bound(tc) : std::numeric_limits<double>::infinity();
    const auto& r = rows[i].rate;
    table.add_row({job.distance, tc, family_label(job.scheme), m_of(job.scheme),
                   n_of(job.scheme), rows[i].t, r.p_success, r.i_ab, r.holevo,
                   r.key_rate, plob});
  }
  return table;
}

Table cmd_excess_noise(const RunConfig& cfg) {
  const auto sel = resolve_t(cfg, {true, {}});
  const auto schemes = select_schemes(cfg, catalysis_set({0, 1}, true, true));
  const auto distances = distance_grid(cfg);
  const auto src = cfg.source();

  struct Job {
    TunableScheme scheme;
    double t;
    double distance;
  };
  std::vector<Job> jobs;
  for (const auto& [s, t] : expand(schemes, sel)) {
    for (const double d : distances) jobs.push_back({s, t, d});
  }
  const auto results = parallel_map(jobs.size(), [&](std::size_t i) {
    const auto& job = jobs[i];
    SearchOptions opts{cfg.atten_db_km, search_for(sel, job.t)};
    return max_tolerable_excess_noise({job.scheme, cfg.beta, src}, job.distance,
                                      opts);
  });

  auto table = make_table(cfg, {"distance_km", "scheme", "m", "n", "T",
                                "eps_max", "monotone"});
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const auto& job = jobs[i];
    table.add_row({job.distance, family_label(job.scheme), m_of(job.scheme),
                   n_of(job.scheme), results[i].t_opt, results[i].epsilon_max,
                   static_cast<long long>(results[i].monotone)});
  }
  return table;
}

Table cmd_max_distance(const RunConfig& cfg) {
  const auto sel = resolve_t(cfg, {true, {}});
  if (!(cfg.floor > 0.0)) throw UsageError("--floor must be positive");
  const auto schemes = select_schemes(cfg, catalysis_set({0, 1}, true, true));
  const auto src = cfg.source();
  const auto jobs = expand(schemes, sel);
  const auto results = parallel_map(jobs.size(), [&](std::size_t i) {
    const auto& [scheme, t] = jobs[i];
    SearchOptions opts{cfg.atten_db_km, search_for(sel, t)};
    return max_distance({scheme, cfg.beta, src}, cfg.epsilon, cfg.floor, opts);
  });

  auto table = make_table(cfg, {"scheme", "m", "n", "T", "epsilon", "floor",
                                "max_distance_km", "monotone"});
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const auto& scheme = jobs[i].first;
    table.add_row({family_label(scheme), m_of(scheme), n_of(scheme),
                   results[i].t_opt, cfg.epsilon, cfg.floor,
                   results[i].distance_km,
                   static_cast<long long>(results[i].monotone)});
  }
  return table;
}

VerifyReport cmd_verify(const RunConfig& cfg) {
  using oracle::BeamSplitterSign;
  if (!(cfg.tolerance > 0.0)) throw UsageError("--tolerance must be positive");
  if (cfg.samples < 0) throw UsageError("--samples must be >= 0");
  if (cfg.cutoff && *cfg.cutoff < 1) throw UsageError("--cutoff must be >= 1");

  std::vector<SourceParams> sources;
  if (cfg.alpha || cfg.variance) {
    sources.push_back(cfg.source());
  } else {
    for (const double a : {0.5, 1.0, 3.0}) sources.push_back(SourceParams::from_alpha(a));
  }

  std::vector<std::pair<CatalysisConfig, SourceParams>> cat_cases;
  for (const auto& src : sources) {
    for (const double t : {0.7, 0.9, 0.95}) {
      for (const int k : {0, 1, 2}) {
        cat_cases.emplace_back(CatalysisConfig::bilateral(k, t), src);
        cat_cases.emplace_back(CatalysisConfig::single_side(k, t), src);
      }
    }
  }
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> t_dist(0.7, 1.0);
  std::uniform_real_distribution<double> a_dist(0.2, 3.0);
  std::uniform_int_distribution<int> k_dist(0, 2);
  std::bernoulli_distribution side(0.5);
  for (int i = 0; i < cfg.samples; ++i) {
    const double t = t_dist(rng);
    const int k = k_dist(rng);
    const auto src = (cfg.alpha || cfg.variance) ? cfg.source()
                                                 : SourceParams::from_alpha(a_dist(rng));
    cat_cases.emplace_back(side(rng) ? CatalysisConfig::bilateral(k, t)
                                     : CatalysisConfig::single_side(k, t),
                           src);
  }

  std::vector<std::pair<SubtractionConfig, SourceParams>> sub_cases;
  std::vector<SourceParams> sub_sources;
  if (cfg.alpha || cfg.variance) {
    sub_sources.push_back(cfg.source());
  } else {
    sub_sources = {SourceParams::from_lambda(0.3), SourceParams::from_lambda(0.5),
                   SourceParams::from_variance(20.0)};
  }
  for (const auto& src : sub_sources) {
    for (const double t : {0.5, 0.8, 0.95}) sub_cases.emplace_back(SubtractionConfig{t}, src);
  }

  const auto sign =
      cfg.flip_bs_sign ? BeamSplitterSign::flipped : BeamSplitterSign::standard;

  struct CatDev {
    double pd, x, z, e_n, weights, flip_pd, flip_e_n;
  };
  const auto cat_devs = parallel_map(cat_cases.size(), [&](std::size_t i) {
    const auto& [c, src] = cat_cases[i];
    const auto analytic = catalyzed_state(c, src);
    const auto spectrum = schmidt_spectrum(c, src);
    const auto sim = oracle::simulate_catalysis(c, src, cfg.cutoff, sign);
    double wdev = 0.0;
    const auto nw = std::min<std::size_t>(10, std::min(spectrum.weights.size(),
                                                       sim.weights.size()));
    for (std::size_t l = 0; l < nw; ++l) {
      wdev = std::max(wdev, std::abs(spectrum.weights[l] - sim.weights[l]));
    }
    CatDev dev{std::abs(analytic.success_probability - sim.pd),
               std::max(std::abs(analytic.covariance.x - sim.covariance.x),
                        std::abs(analytic.covariance.y - sim.covariance.y)),
               std::abs(analytic.covariance.z - sim.covariance.z),
               std::abs(log_negativity(spectrum) - sim.e_n),
               wdev,
               0.0,
               0.0};
    if (cfg.flip_bs_sign) {
      const auto reference = oracle::simulate_catalysis(
          c, src, cfg.cutoff, BeamSplitterSign::standard);
      dev.flip_pd = std::abs(reference.pd - sim.pd);
      dev.flip_e_n = std::abs(reference.e_n - sim.e_n);
    }
    return dev;
  });

  struct SubDev {
    double p1, x, y, z;
  };
  const auto sub_devs = parallel_map(sub_cases.size(), [&](std::size_t i) {
    const auto& [c, src] = sub_cases[i];
    const auto sim = oracle::simulate_subtraction(c, src, cfg.cutoff, sign);
    const double p1 = ss_success_probability(c, src);
    if (p1 == 0.0) return SubDev{std::abs(sim.p1), 0.0, 0.0, 0.0};
    const auto cov = ss_output_covariance(c, src);
    return SubDev{std::abs(p1 - sim.p1), std::abs(cov.x - sim.covariance.x),
                  std::abs(cov.y - sim.covariance.y),
                  std::abs(cov.z - sim.covariance.z)};
  });

  VerifyReport report;
  report.table = make_table(cfg, {"quantity", "cases", "max_abs_deviation",
                                  "tolerance", "status"});
  report.passed = true;
  auto add = [&](const std::string& name, std::size_t cases, double dev) {
    const bool ok = dev <= cfg.tolerance;
    report.passed = report.passed && ok;
    report.table.add_row({name, static_cast<long long>(cases), dev,
                          cfg.tolerance, std::string(ok ? "pass" : "fail")});
  };
  auto max_of = [](const auto& devs, auto field) {
    double m = 0.0;
    for (const auto& d : devs) m = std::max(m, d.*field);
    return m;
  };
  add("catalysis_pd", cat_devs.size(), max_of(cat_devs, &CatDev::pd));
  add("catalysis_x", cat_devs.size(), max_of(cat_devs, &CatDev::x));
  add("catalysis_z", cat_devs.size(), max_of(cat_devs, &CatDev::z));
  add("catalysis_e_n", cat_devs.size(), max_of(cat_devs, &CatDev::e_n));
  add("catalysis_weights", cat_devs.size(), max_of(cat_devs, &CatDev::weights));
  add("subtraction_p1", sub_devs.size(), max_of(sub_devs, &SubDev::p1));
  add("subtraction_x", sub_devs.size(), max_of(sub_devs, &SubDev::x));
  add("subtraction_y", sub_devs.size(), max_of(sub_devs, &SubDev::y));
  add("subtraction_z", sub_devs.size(), max_of(sub_devs, &SubDev::z));
  if (cfg.flip_bs_sign) {
    add("sign_flip_pd", cat_devs.size(), max_of(cat_devs, &CatDev::flip_pd));
    add("sign_flip_e_n", cat_devs.size(), max_of(cat_devs, &CatDev::flip_e_n));
  }
  return report;
}

}  // namespace qcqkd::cli
