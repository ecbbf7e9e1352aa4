#include "ltp/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "json.hpp"
#include "ltp/curvature.hpp"
#include "ltp/flatness.hpp"
#include "ltp/holonomy.hpp"
#include "ltp/identities.hpp"
#include "ltp/parallel.hpp"
#include "ltp/transport.hpp"

namespace ltp {

namespace {

using nlohmann::json;

// Deterministic generator for spot-check vectors; the report must serialize
// identically across runs, so no library distribution objects are used.
struct SplitMix {
  std::uint64_t state;

  explicit SplitMix(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  double uniform(double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(next() >> 11) * 0x1.0p-53);
  }

  Vec vector(int n, double lo, double hi) {
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = uniform(lo, hi);
    return v;
  }
};

std::string fmt_point(const Vec& x) {
  std::string out = "(";
  for (int i = 0; i < x.size(); ++i) {
    if (i > 0) out += ", ";
    out += format_double(x[i]);
  }
  return out + ")";
}

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

// ---------------------------------------------------------------------------
// Config parsing

using FailFn = std::function<void(const std::string& key, const std::string& msg)>;

void check_fields(const ExperimentConfig& c, const FailFn& fail) {
  if (c.schema != 1) fail("schema", "schema must be 1");

  const auto& names = experiment_names();
  if (std::find(names.begin(), names.end(), c.experiment) == names.end()) {
    std::string list;
    for (const auto& n : names) list += (list.empty() ? "" : "|") + n;
    fail("experiment", "unknown experiment '" + c.experiment + "' (expected " + list + ")");
  }

  auto models = models::model_names();
  if (std::find(models.begin(), models.end(), c.model) == models.end())
    fail("model", "unknown model '" + c.model + "'");
  if (c.model_options.constant_g.size() > 0 &&
      c.model_options.constant_g.rows() != c.model_options.constant_g.cols())
    fail("model", "constant_g must be a square matrix");
  if (c.model_options.frame_name != "identity" && c.model_options.frame_name != "rotation" &&
      c.model_options.frame_name != "diag_exp")
    fail("model", "unknown frame '" + c.model_options.frame_name +
                      "' (expected identity, rotation, or diag_exp)");

  if (c.grid_lo.has_value() != c.grid_hi.has_value())
    fail("grid", "grid needs both lo and hi (or neither)");
  if (c.grid_lo) {
    if (c.grid_lo->size() != 2 || c.grid_hi->size() != 2)
      fail("grid", "grid lo and hi must be 2-d points");
    for (int k = 0; k < 2; ++k)
      if (!((*c.grid_lo)[k] < (*c.grid_hi)[k]))
        fail("grid", "grid box needs lo < hi on every axis");
  }
  if (c.grid_nx < 2 || c.grid_ny < 2)
    fail("grid", "grid resolution must be at least 2 per axis");

  if (c.steps < 0) fail("steps", "steps must be >= 0 (0 selects the default)");
  if (!(c.fd_step > 0.0)) fail("fd_step", "fd_step must be positive");

  for (size_t i = 0; i < c.h_sequence.size(); ++i) {
    if (!(c.h_sequence[i] > 0.0)) fail("h_sequence", "h_sequence entries must be positive");
    if (i > 0 && !(c.h_sequence[i] < c.h_sequence[i - 1]))
      fail("h_sequence", "h_sequence must be strictly decreasing");
  }

  for (const auto& [name, value] : c.tolerances)
    if (!(value > 0.0)) fail("tolerances", "tolerance '" + name + "' must be positive");

  if (c.format != "json" && c.format != "csv")
    fail("format", "format must be json or csv");
}

int line_of_key(const std::string& text, const std::string& key) {
  size_t pos = text.find("\"" + key + "\"");
  if (pos == std::string::npos) return 1;
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + pos, '\n'));
}

int line_of_offset(const std::string& text, size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + byte, '\n'));
}

[[noreturn]] void fail_at_key(const std::string& filename, const std::string& text,
                              const std::string& key, const std::string& msg) {
  throw config_error(filename + ":" + std::to_string(line_of_key(text, key)) + ": " + msg);
}

double as_number(const json& j, const std::string& filename, const std::string& text,
                 const std::string& key) {
  if (!j.is_number()) fail_at_key(filename, text, key, key + " must be a number");
  return j.get<double>();
}

int as_int(const json& j, const std::string& filename, const std::string& text,
           const std::string& key) {
  if (!j.is_number_integer()) fail_at_key(filename, text, key, key + " must be an integer");
  return j.get<int>();
}

std::string as_string(const json& j, const std::string& filename, const std::string& text,
                      const std::string& key) {
  if (!j.is_string()) fail_at_key(filename, text, key, key + " must be a string");
  return j.get<std::string>();
}

Vec as_point(const json& j, const std::string& filename, const std::string& text,
             const std::string& key) {
  if (!j.is_array()) fail_at_key(filename, text, key, key + " must be an array of numbers");
  Vec v(static_cast<int>(j.size()));
  for (size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number())
      fail_at_key(filename, text, key, key + " must be an array of numbers");
    v[static_cast<int>(i)] = j[i].get<double>();
  }
  return v;
}

// ---------------------------------------------------------------------------
// Shared experiment state

struct Runner {
  const ExperimentConfig& cfg;
  models::ModelSetup setup;
  std::map<std::string, double> tol;
  GeometryReport rep;

  double tolerance(const std::string& name) const {
    auto it = tol.find(name);
    if (it == tol.end())
      throw std::logic_error("experiment asked for undeclared tolerance " + name);
    return it->second;
  }

  CheckRecord& add_check(const std::string& name, double value, double tolerance_value,
                         bool pass, const std::string& param_point = "", double h = kNan) {
    CheckRecord rec;
    rec.name = name;
    rec.model = setup.name;
    rec.param_point = param_point;
    rec.h = h;
    rec.value = value;
    rec.tolerance = tolerance_value;
    rec.pass = pass;
    rep.checks.push_back(std::move(rec));
    return rep.checks.back();
  }

  CheckRecord& add_bound_check(const std::string& name, double value,
                               const std::string& tol_name,
                               const std::string& param_point = "", double h = kNan) {
    double t = tolerance(tol_name);
    return add_check(name, value, t, value <= t, param_point, h);
  }

  void add_fit(const std::string& name, const OrderFit& fit,
               const std::vector<std::pair<double, double>>& points) {
    FitRecord rec;
    rec.name = name;
    rec.slope = fit.slope;
    rec.intercept = fit.intercept;
    rec.at_floor = fit.at_floor;
    for (const auto& [h, r] : points) rec.points.push_back({h, r});
    rep.fits.push_back(std::move(rec));
  }

  void add_verdict(const std::string& name, const std::string& value,
                   const std::string& detail = "") {
    rep.verdicts.push_back({name, value, detail});
  }

  int steps_or(int fallback) const { return cfg.steps > 0 ? cfg.steps : fallback; }

  Path region_diagonal() const {
    return Path::segment(setup.region_lo, setup.region_hi, "region diagonal");
  }

  RegionGrid grid() const {
    Vec lo = cfg.grid_lo ? *cfg.grid_lo : setup.region_lo;
    Vec hi = cfg.grid_hi ? *cfg.grid_hi : setup.region_hi;
    return RegionGrid(lo, hi, cfg.grid_nx, cfg.grid_ny);
  }
};

std::map<std::string, double> default_tolerances(const std::string& experiment) {
  if (experiment == "axioms")
    return {{"identity", 1e-12}, {"cocycle", 1e-8},      {"inverse", 1e-8},
            {"linearity", 1e-12}, {"frame_match", 1e-9}};
  if (experiment == "expansion")
    return {{"residual", 1e-3}, {"order_center", 3.0}, {"order_band", 0.3}};
  if (experiment == "torsion")
    return {{"operator_vs_components", 1e-6}, {"expected_value", 1e-9}};
  if (experiment == "curvature")
    return {{"fd_vs_analytic", 1e-6},
            {"commutator_vs_matrix", 1e-5},
            {"antisymmetry", 1e-10},
            {"zero_curvature", 1e-8}};
  if (experiment == "pentagon")
    return {{"torsion_recovery", 1e-3}, {"remainder_order_min", 2.7}, {"remainder_small", 1e-8}};
  if (experiment == "holonomy")
    return {{"curvature_match", 1e-5}, {"identity_loop", 1e-8}, {"order_min", 2.7}};
  if (experiment == "bianchi")
    return {{"antisymmetry", 1e-10}, {"second_identity", 1e-4}, {"order_center", 2.0},
            {"order_band", 0.3},     {"first_identity", 1e-4},  {"sides_small", 1e-6},
            {"four_point", 1e-8}};
  if (experiment == "flatness")
    return {{"curvature_tolerance", 1e-8}, {"defect_tolerance", 1e-7}, {"frame_identity", 1e-7}};
  if (experiment == "sweep") return {{"curvature_match", 1e-3}};
  return {};
}

std::vector<double> default_h_sequence(const std::string& experiment) {
  if (experiment == "expansion") return {0.04, 0.02, 0.01, 0.005};
  if (experiment == "pentagon" || experiment == "bianchi") return {4e-3, 2e-3, 1e-3, 5e-4};
  if (experiment == "holonomy" || experiment == "sweep") return {0.04, 0.02, 0.01};
  return {};
}

// ---------------------------------------------------------------------------
// Experiments

void run_axioms(Runner& r) {
  const auto& provider = r.setup.provider;
  Path diag = r.region_diagonal();
  int steps = r.steps_or(1000);

  Mat h_full = transport_matrix(provider, diag, 0.0, 1.0, steps).value;
  Mat h_first = transport_matrix(provider, diag, 0.0, 0.5, steps / 2).value;
  Mat h_second = transport_matrix(provider, diag, 0.5, 1.0, steps - steps / 2).value;
  Mat h_back = transport_matrix(provider, diag, 1.0, 0.0, steps).value;
  Mat eye = Mat::Identity(h_full.rows(), h_full.cols());

  Mat h_point = transport_matrix(provider, diag, 0.5, 0.5, steps).value;
  r.add_bound_check("transport at equal parameters is the identity",
                    (h_point - eye).norm(), "identity", diag.label());
  r.add_bound_check("composing transports concatenates ranges",
                    (h_second * h_first - h_full).norm(), "cocycle", diag.label());
  r.add_bound_check("reversed transport inverts the forward one",
                    (h_back * h_full - eye).norm(), "inverse", diag.label());

  SplitMix rng(r.cfg.seed);
  int n = provider.fibre_dim();
  Vec u = rng.vector(n, -1.0, 1.0);
  Vec v = rng.vector(n, -1.0, 1.0);
  double alpha = rng.uniform(-2.0, 2.0);
  double beta = rng.uniform(-2.0, 2.0);
  Vec lhs = transport_vector(provider, diag, 0.0, 1.0, alpha * u + beta * v, steps);
  Vec rhs = alpha * transport_vector(provider, diag, 0.0, 1.0, u, steps) +
            beta * transport_vector(provider, diag, 0.0, 1.0, v, steps);
  r.add_bound_check("transport acts linearly on fibre vectors", (lhs - rhs).norm(),
                    "linearity", diag.label());

  if (r.setup.frame) {
    Mat from_frame = transport_from_frame_map(*r.setup.frame, diag, 0.0, 1.0).value;
    r.add_bound_check("frame-map transport matches the integrated one",
                      (from_frame - h_full).norm(), "frame_match", diag.label());
  }
}

void run_expansion(Runner& r) {
  const auto& provider = r.setup.provider;
  Path diag = r.region_diagonal();
  const double s = 0.25;

  std::vector<std::pair<double, double>> points;
  for (double h : r.cfg.h_sequence) {
    double residual = expansion_check(provider, diag, s, h);
    points.emplace_back(h, residual);
    r.add_bound_check("second-order expansion residual", residual, "residual",
                      diag.label() + " at s=" + format_double(s), h);
  }

  OrderFit fit = convergence_order(points);
  r.add_fit("expansion residual order", fit, points);
  double center = r.tolerance("order_center");
  double band = r.tolerance("order_band");
  bool pass = fit.at_floor || std::abs(fit.slope - center) <= band;
  CheckRecord& rec = r.add_check("expansion residual decays at cubic order", fit.slope, band,
                                 pass, diag.label());
  if (fit.at_floor) rec.detail = "residuals at roundoff floor";
}

void run_torsion(Runner& r) {
  const auto& provider = r.setup.provider;
  const Family& family = r.setup.family;
  double s0 = r.setup.s0;
  double t0 = r.setup.t0;
  std::string at = fmt_point(family.point(s0, t0));

  Vec from_components = torsion_components(provider, family, s0, t0);
  Vec from_operator = torsion_operator(provider, family, s0, t0);
  r.add_bound_check("derivation-difference torsion matches the component formula",
                    (from_operator - from_components).norm(), "operator_vs_components", at);

  if (r.setup.name == "torsion_plane") {
    Vec expected(2);
    expected << -r.cfg.model_options.torsion_c, 0.0;
    r.add_bound_check("torsion components equal the model constants",
                      (from_components - expected).norm(), "expected_value", at);
  }
  if (r.setup.name == "flat" || r.setup.name == "sphere") {
    r.add_bound_check("symmetric connection has vanishing torsion", from_components.norm(),
                      "expected_value", at);
  }
}

void run_curvature(Runner& r) {
  const auto& provider = r.setup.provider;
  const Family& family = r.setup.family;
  double s0 = r.setup.s0;
  double t0 = r.setup.t0;
  std::string at = fmt_point(family.point(s0, t0));

  Mat curv = curvature_matrix(provider, family, s0, t0, r.cfg.fd_step);
  if (provider.is_connection_induced() && provider.has_gamma3_grad() &&
      family.has_mixed_partial()) {
    Mat analytic = curvature_matrix_analytic(provider, family, s0, t0);
    r.add_bound_check("finite-difference curvature matches the closed form",
                      (curv - analytic).norm(), "fd_vs_analytic", at);
  }
  if (r.setup.expect_zero_curvature) {
    r.add_bound_check("curvature vanishes", curv.norm(), "zero_curvature", at);
  }

  SplitMix rng(r.cfg.seed);
  Vec w = rng.vector(provider.fibre_dim(), -1.0, 1.0);
  FamilySection section([w](double, double) { return w; },
                        [w](double, double) { return Vec(Vec::Zero(w.size())); },
                        [w](double, double) { return Vec(Vec::Zero(w.size())); });
  Vec from_commutator =
      curvature_commutator(provider, family, section, s0, t0, r.cfg.fd_step);
  r.add_bound_check("derivation commutator matches the matrix action",
                    (from_commutator - curv * w).norm(), "commutator_vs_matrix", at);

  auto [antisym_r, antisym_t] =
      check_antisymmetry(provider, r.setup.make_chart_bundle(3), 0, 1, r.cfg.fd_step);
  r.add_bound_check("curvature is antisymmetric in its directions", antisym_r,
                    "antisymmetry", at);
  if (r.setup.tangent_bundle)
    r.add_bound_check("torsion is antisymmetric in its directions", antisym_t,
                      "antisymmetry", at);
}

void run_pentagon(Runner& r) {
  const auto& provider = r.setup.provider;
  const Family& family = r.setup.family;
  double s0 = r.setup.s0;
  double t0 = r.setup.t0;
  std::string at = fmt_point(family.point(s0, t0));

  Vec torsion = torsion_components(provider, family, s0, t0);
  std::vector<std::pair<double, double>> remainders;
  double last_ratio_residual = 0.0;
  for (double h : r.cfg.h_sequence) {
    Vec defect = pentagon_defect(provider, family, s0, t0, h, h, r.cfg.steps);
    last_ratio_residual = (defect / (h * h) + torsion).norm();
    remainders.emplace_back(h, (defect + h * h * torsion).norm());
  }
  double h_min = r.cfg.h_sequence.back();
  r.add_bound_check("pentagon defect over the step area recovers the torsion",
                    last_ratio_residual, "torsion_recovery", at, h_min);

  OrderFit fit = convergence_order(remainders);
  r.add_fit("pentagon remainder order", fit, remainders);
  double order_min = r.tolerance("remainder_order_min");
  bool pass = fit.at_floor || fit.slope >= order_min;
  CheckRecord& rec = r.add_check("pentagon remainder decays at cubic order", fit.slope,
                                 order_min, pass, at);
  if (fit.at_floor) rec.detail = "residuals at roundoff floor";

  DoubleTransportDefect dt =
      double_transport_defect(provider, family, s0, t0, h_min, h_min, r.cfg.steps);
  r.add_bound_check("double-transport remainder is third order small",
                    dt.remainder.norm(), "remainder_small", at, h_min);
}

void run_holonomy(Runner& r) {
  const auto& provider = r.setup.provider;
  const Family& family = r.setup.family;
  double s0 = r.setup.s0;
  double t0 = r.setup.t0;
  std::string at = fmt_point(family.point(s0, t0));

  Mat curv = curvature_matrix(provider, family, s0, t0, r.cfg.fd_step);
  Mat eye = Mat::Identity(curv.rows(), curv.cols());

  std::vector<std::pair<double, double>> residuals;
  for (double h : r.cfg.h_sequence) {
    Mat hol = loop_holonomy(provider, family, s0, t0, h, h, r.cfg.steps);
    residuals.emplace_back(h, (hol - (eye - h * h * curv)).norm());
  }
  OrderFit fit = convergence_order(residuals);
  r.add_fit("loop expansion residual order", fit, residuals);
  double order_min = r.tolerance("order_min");
  bool pass = fit.at_floor || fit.slope >= order_min;
  CheckRecord& rec = r.add_check("loop holonomy expands through second order", fit.slope,
                                 order_min, pass, at);
  if (fit.at_floor) rec.detail = "residuals at roundoff floor";

  if (r.setup.expect_zero_curvature) {
    double h = r.cfg.h_sequence.front();
    Mat hol = loop_holonomy(provider, family, s0, t0, h, h, r.cfg.steps);
    r.add_bound_check("loops around curvature-free rectangles are trivial",
                      (hol - eye).norm(), "identity_loop", at, h);
  } else {
    HolonomyEstimate est = holonomy_curvature_estimate(provider, family, s0, t0,
                                                       r.cfg.h_sequence, r.cfg.steps);
    r.add_bound_check("extrapolated loop estimate matches the curvature",
                      (est.value - curv).norm(), "curvature_match", at);
    r.add_verdict("richardson order", format_double(est.fitted_order),
                  "error order fitted from successive loop estimates");
  }
}

void run_bianchi(Runner& r) {
  const auto& provider = r.setup.provider;

  MultiFamily mf3 = r.setup.make_chart_bundle(3).with_basepoint({0.1, -0.05, 0.04});
  std::string at = fmt_point(mf3.point(mf3.basepoint()));

  auto [antisym_r, antisym_t] = check_antisymmetry(provider, mf3, 0, 1, r.cfg.fd_step);
  r.add_bound_check("curvature is antisymmetric in its directions", antisym_r,
                    "antisymmetry", at);
  r.add_bound_check("torsion is antisymmetric in its directions", antisym_t,
                    "antisymmetry", at);

  SplitMix rng(r.cfg.seed);
  Vec w = rng.vector(provider.fibre_dim(), -1.0, 1.0);

  std::vector<std::pair<double, double>> residuals;
  for (double h : r.cfg.h_sequence)
    residuals.emplace_back(h, check_bianchi_second(provider, mf3, w, h));
  r.add_bound_check("differentiated curvature sums to zero over cyclic directions",
                    residuals.back().second, "second_identity", at,
                    r.cfg.h_sequence.back());
  OrderFit fit = convergence_order(residuals);
  r.add_fit("second identity residual order", fit, residuals);
  double center = r.tolerance("order_center");
  double band = r.tolerance("order_band");
  bool pass = fit.at_floor || std::abs(fit.slope - center) <= band;
  CheckRecord& rec = r.add_check("second identity residual decays at quadratic order",
                                 fit.slope, band, pass, at);
  if (fit.at_floor) rec.detail = "residuals at roundoff floor";

  if (r.setup.tangent_bundle) {
    BianchiFirstSides sides =
        check_bianchi_first(provider, mf3, r.cfg.h_sequence.back());
    r.add_bound_check("curvature and torsion sides of the first identity agree",
                      sides.residual, "first_identity", at, r.cfg.h_sequence.back());
    if (r.setup.expect_zero_curvature) {
      r.add_bound_check("curvature side of the first identity vanishes",
                        sides.lhs.norm(), "sides_small", at);
      r.add_bound_check("torsion side of the first identity vanishes",
                        sides.rhs.norm(), "sides_small", at);
    }
  }

  MultiFamily mf4 = r.setup.make_chart_bundle(4).with_basepoint({0.1, -0.05, 0.04, 0.03});
  double four = check_four_point(provider, mf4, w, r.cfg.fd_step);
  r.add_bound_check("four-direction commutator cycle cancels", four, "four_point",
                    fmt_point(mf4.point(mf4.basepoint())));
}

void run_flatness(Runner& r) {
  const auto& provider = r.setup.provider;
  RegionGrid grid = r.grid();
  std::string box = fmt_point(grid.lo()) + " to " + fmt_point(grid.hi());

  FlatnessVerdict v =
      flatness_verdict(provider, grid, r.tolerance("curvature_tolerance"),
                       r.tolerance("defect_tolerance"), r.cfg.steps, r.cfg.fd_step);
  r.add_verdict("flat by curvature", v.flat_by_curvature ? "flat" : "not flat",
                "curvature sup " + format_double(v.curvature_sup) + " over " + box);
  r.add_verdict("flat by transport", v.flat_by_transport ? "flat" : "not flat",
                "max defect " + format_double(v.max_defect) + " for " + v.worst_pair);
  r.add_verdict("criteria consistent", v.consistent ? "yes" : "no",
                provider.is_connection_induced()
                    ? ""
                    : "equivalence is not asserted for path-functional transports");

  if (provider.is_connection_induced()) {
    r.add_check("curvature and transport criteria agree", v.consistent ? 0.0 : 1.0, 0.5,
                v.consistent, box);
  }

  if (v.flat_by_transport) {
    FrameField frame =
        construct_flat_frame(provider, grid, r.setup.basepoint,
                             Mat::Identity(provider.fibre_dim(), provider.fibre_dim()),
                             r.cfg.steps, r.tolerance("defect_tolerance"));
    std::vector<Vec> nodes = grid.nodes();
    SplitMix rng(r.cfg.seed);
    double worst = 0.0;
    std::string worst_at;
    for (int trial = 0; trial < 8; ++trial) {
      int i = static_cast<int>(rng.next() % nodes.size());
      int j = static_cast<int>(rng.next() % nodes.size());
      if (i == j) j = (j + 1) % static_cast<int>(nodes.size());
      Path direct = Path::segment(nodes[i], nodes[j]);
      int steps = r.cfg.steps > 0 ? r.cfg.steps : default_steps(1.0);
      Mat h = transport_matrix(provider, direct, 0.0, 1.0, steps).value;
      Mat in_frame = frame.basis_at(nodes[j])
                         .partialPivLu()
                         .solve(h * frame.basis_at(nodes[i]));
      double res = (in_frame - Mat::Identity(h.rows(), h.cols())).norm();
      if (res >= worst) {
        worst = res;
        worst_at = fmt_point(nodes[i]) + " to " + fmt_point(nodes[j]);
      }
    }
    r.add_bound_check("transports are the identity in the constructed frame", worst,
                      "frame_identity", worst_at);
  }
}

void run_sweep(Runner& r) {
  const auto& provider = r.setup.provider;
  RegionGrid grid = r.grid();
  std::vector<Vec> nodes = grid.nodes();

  double reach = r.cfg.h_sequence.front() + 0.02;
  std::vector<CheckRecord> rows(nodes.size());
  std::vector<double> curvature_norms(nodes.size(), 0.0);
  parallel_for(static_cast<int>(nodes.size()), [&](int k) {
    Family fam = models::coordinate_family(nodes[k], Interval{-reach, reach},
                                           Interval{-reach, reach});
    Mat curv = curvature_matrix(provider, fam, 0.0, 0.0, r.cfg.fd_step);
    HolonomyEstimate est = holonomy_curvature_estimate(provider, fam, 0.0, 0.0,
                                                       r.cfg.h_sequence, r.cfg.steps);
    curvature_norms[k] = curv.norm();
    CheckRecord rec;
    rec.name = "extrapolated loop estimate matches the curvature";
    rec.model = r.setup.name;
    rec.param_point = fmt_point(nodes[k]);
    rec.value = (est.value - curv).norm();
    rec.tolerance = r.tolerance("curvature_match");
    rec.pass = rec.value <= rec.tolerance;
    rows[k] = std::move(rec);
  });
  for (CheckRecord& rec : rows) r.rep.checks.push_back(std::move(rec));

  double sup = *std::max_element(curvature_norms.begin(), curvature_norms.end());
  r.add_verdict("curvature sup over grid", format_double(sup),
                fmt_point(grid.lo()) + " to " + fmt_point(grid.hi()) + ", " +
                    std::to_string(grid.nx()) + "x" + std::to_string(grid.ny()) + " nodes");
}

}  // namespace

// ---------------------------------------------------------------------------

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {
      "axioms",   "expansion", "torsion", "curvature", "pentagon",
      "holonomy", "bianchi",   "flatness", "sweep"};
  return names;
}

std::string ExperimentConfig::canonical_json() const {
  json j;
  j["schema"] = schema;
  j["experiment"] = experiment;
  json jm;
  jm["name"] = model;
  if (model == "constant" && model_options.constant_g.size() > 0) {
    json rows = json::array();
    for (int i = 0; i < model_options.constant_g.rows(); ++i) {
      json row = json::array();
      for (int k = 0; k < model_options.constant_g.cols(); ++k)
        row.push_back(model_options.constant_g(i, k));
      rows.push_back(row);
    }
    jm["constant_g"] = rows;
  }
  if (model == "torsion_plane") jm["torsion_c"] = model_options.torsion_c;
  if (model == "frame") jm["frame"] = model_options.frame_name;
  j["model"] = jm;
  json jg;
  if (grid_lo) {
    jg["lo"] = {(*grid_lo)[0], (*grid_lo)[1]};
    jg["hi"] = {(*grid_hi)[0], (*grid_hi)[1]};
  }
  jg["resolution"] = {grid_nx, grid_ny};
  j["grid"] = jg;
  j["steps"] = steps;
  j["fd_step"] = fd_step;
  j["h_sequence"] = h_sequence;
  j["tolerances"] = tolerances;
  j["seed"] = seed;
  return j.dump();
}

void validate_config(const ExperimentConfig& config) {
  check_fields(config, [](const std::string& key, const std::string& msg) {
    throw config_error("config " + key + ": " + msg);
  });
}

ExperimentConfig parse_config(const std::string& json_text, const std::string& filename) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& err) {
    throw config_error(filename + ":" + std::to_string(line_of_offset(json_text, err.byte)) +
                       ": invalid JSON: " + err.what());
  }
  if (!doc.is_object())
    throw config_error(filename + ":1: config document must be a JSON object");

  auto fail = [&](const std::string& key, const std::string& msg) {
    fail_at_key(filename, json_text, key, msg);
  };

  static const std::vector<std::string> allowed = {
      "schema", "experiment", "model",      "grid",  "steps",
      "fd_step", "h_sequence", "tolerances", "seed", "output"};
  for (const auto& [key, value] : doc.items())
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      fail(key, "unknown key '" + key + "'");

  ExperimentConfig cfg;
  if (doc.contains("schema")) cfg.schema = as_int(doc["schema"], filename, json_text, "schema");
  if (doc.contains("experiment"))
    cfg.experiment = as_string(doc["experiment"], filename, json_text, "experiment");

  if (doc.contains("model")) {
    const json& jm = doc["model"];
    if (jm.is_string()) {
      cfg.model = jm.get<std::string>();
    } else if (jm.is_object()) {
      static const std::vector<std::string> model_keys = {"name", "constant_g", "torsion_c",
                                                          "frame"};
      for (const auto& [key, value] : jm.items())
        if (std::find(model_keys.begin(), model_keys.end(), key) == model_keys.end())
          fail("model", "unknown model key '" + key + "'");
      if (!jm.contains("name")) fail("model", "model object needs a name");
      cfg.model = as_string(jm["name"], filename, json_text, "model");
      if (jm.contains("torsion_c"))
        cfg.model_options.torsion_c =
            as_number(jm["torsion_c"], filename, json_text, "torsion_c");
      if (jm.contains("frame"))
        cfg.model_options.frame_name = as_string(jm["frame"], filename, json_text, "frame");
      if (jm.contains("constant_g")) {
        const json& jgm = jm["constant_g"];
        if (!jgm.is_array() || jgm.empty())
          fail("constant_g", "constant_g must be a non-empty array of rows");
        int rows = static_cast<int>(jgm.size());
        int cols = -1;
        Mat g;
        for (int i = 0; i < rows; ++i) {
          Vec row = as_point(jgm[i], filename, json_text, "constant_g");
          if (cols < 0) {
            cols = static_cast<int>(row.size());
            g.resize(rows, cols);
          } else if (row.size() != cols) {
            fail("constant_g", "constant_g rows must have equal length");
          }
          g.row(i) = row.transpose();
        }
        cfg.model_options.constant_g = g;
      }
    } else {
      fail("model", "model must be a name or an object");
    }
  }

  if (doc.contains("grid")) {
    const json& jg = doc["grid"];
    if (!jg.is_object()) fail("grid", "grid must be an object");
    static const std::vector<std::string> grid_keys = {"lo", "hi", "resolution"};
    for (const auto& [key, value] : jg.items())
      if (std::find(grid_keys.begin(), grid_keys.end(), key) == grid_keys.end())
        fail("grid", "unknown grid key '" + key + "'");
    if (jg.contains("lo")) cfg.grid_lo = as_point(jg["lo"], filename, json_text, "lo");
    if (jg.contains("hi")) cfg.grid_hi = as_point(jg["hi"], filename, json_text, "hi");
    if (jg.contains("resolution")) {
      Vec res = as_point(jg["resolution"], filename, json_text, "resolution");
      if (res.size() != 2) fail("resolution", "resolution must have two entries");
      cfg.grid_nx = static_cast<int>(res[0]);
      cfg.grid_ny = static_cast<int>(res[1]);
    }
  }

  if (doc.contains("steps")) cfg.steps = as_int(doc["steps"], filename, json_text, "steps");
  if (doc.contains("fd_step"))
    cfg.fd_step = as_number(doc["fd_step"], filename, json_text, "fd_step");
  if (doc.contains("h_sequence")) {
    const json& jh = doc["h_sequence"];
    if (!jh.is_array()) fail("h_sequence", "h_sequence must be an array of numbers");
    for (const json& v : jh)
      cfg.h_sequence.push_back(as_number(v, filename, json_text, "h_sequence"));
  }
  if (doc.contains("tolerances")) {
    const json& jt = doc["tolerances"];
    if (!jt.is_object()) fail("tolerances", "tolerances must be an object");
    for (const auto& [key, value] : jt.items())
      cfg.tolerances[key] = as_number(value, filename, json_text, key);
  }
  if (doc.contains("seed")) {
    const json& js = doc["seed"];
    if (!js.is_number_unsigned() && !js.is_number_integer())
      fail("seed", "seed must be a non-negative integer");
    long long s = js.get<long long>();
    if (s < 0) fail("seed", "seed must be a non-negative integer");
    cfg.seed = static_cast<std::uint64_t>(s);
  }
  if (doc.contains("output")) {
    const json& jo = doc["output"];
    if (!jo.is_object()) fail("output", "output must be an object");
    static const std::vector<std::string> out_keys = {"path", "format"};
    for (const auto& [key, value] : jo.items())
      if (std::find(out_keys.begin(), out_keys.end(), key) == out_keys.end())
        fail("output", "unknown output key '" + key + "'");
    if (jo.contains("path")) cfg.out_path = as_string(jo["path"], filename, json_text, "path");
    if (jo.contains("format"))
      cfg.format = as_string(jo["format"], filename, json_text, "format");
  }

  if (cfg.experiment.empty()) fail("experiment", "config needs an experiment");
  check_fields(cfg, fail);
  return cfg;
}

GeometryReport run_experiment(const ExperimentConfig& config) {
  validate_config(config);

  ExperimentConfig cfg = config;
  if (cfg.h_sequence.empty()) cfg.h_sequence = default_h_sequence(cfg.experiment);

  std::map<std::string, double> tol = default_tolerances(cfg.experiment);
  for (const auto& [name, value] : cfg.tolerances) {
    if (tol.find(name) == tol.end())
      throw config_error("config tolerances: unknown tolerance '" + name + "' for " +
                         cfg.experiment);
    tol[name] = value;
  }
  cfg.tolerances = tol;

  models::ModelSetup setup = models::make_model(cfg.model, cfg.model_options);
  bool needs_tangent = cfg.experiment == "torsion" || cfg.experiment == "pentagon";
  if (needs_tangent && !setup.tangent_bundle)
    throw config_error("config model: " + cfg.experiment +
                       " needs a tangent-bundle model (square coefficient matrices)");
  if (cfg.experiment != "flatness" && cfg.experiment != "sweep" &&
      !cfg.h_sequence.empty() && cfg.h_sequence.size() < 3 &&
      (cfg.experiment == "expansion" || cfg.experiment == "pentagon" ||
       cfg.experiment == "holonomy" || cfg.experiment == "bianchi"))
    throw config_error("config h_sequence: " + cfg.experiment +
                       " needs at least 3 levels for the convergence fit");

  Runner runner{cfg, std::move(setup), cfg.tolerances, {}};
  runner.rep.experiment = cfg.experiment;
  runner.rep.model = runner.setup.name;
  runner.rep.config_echo = cfg.canonical_json();

  if (cfg.experiment == "axioms")
    run_axioms(runner);
  else if (cfg.experiment == "expansion")
    run_expansion(runner);
  else if (cfg.experiment == "torsion")
    run_torsion(runner);
  else if (cfg.experiment == "curvature")
    run_curvature(runner);
  else if (cfg.experiment == "pentagon")
    run_pentagon(runner);
  else if (cfg.experiment == "holonomy")
    run_holonomy(runner);
  else if (cfg.experiment == "bianchi")
    run_bianchi(runner);
  else if (cfg.experiment == "flatness")
    run_flatness(runner);
  else
    run_sweep(runner);

  return std::move(runner.rep);
}

}  // namespace ltp
