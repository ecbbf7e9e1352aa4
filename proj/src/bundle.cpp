#include "ltp/bundle.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "ltp/fd.hpp"

namespace ltp {

namespace {

[[noreturn]] void out_of_domain(const std::string& what, double s, const Interval& iv) {
  throw std::domain_error(what + ": parameter " + format_double(s) + " outside [" +
                          format_double(iv.a) + ", " + format_double(iv.b) + "]");
}

}  // namespace

// ---------------------------------------------------------------------------
// Path

struct Path::Impl {
  Interval domain;
  std::vector<Leg> legs;
  std::string label;
  int base_dim = 0;

  int leg_index(double s) const {
    if (legs.size() == 1) return 0;
    int lo = 0, hi = static_cast<int>(legs.size()) - 1;
    while (lo < hi) {
      const int mid = (lo + hi) / 2;
      if (s <= legs[mid].range.b)
        hi = mid;
      else
        lo = mid + 1;
    }
    return lo;
  }
};

Path::Path(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

Path::Path(Interval domain, std::function<Vec(double)> point,
           std::function<Vec(double)> velocity, std::string label) {
  require_interval(domain, "Path");
  if (!point || !velocity) throw std::invalid_argument("Path: null point or velocity map");
  auto impl = std::make_shared<Impl>();
  impl->domain = domain;
  impl->legs.push_back(Leg{domain, std::move(point), std::move(velocity)});
  impl->label = std::move(label);
  impl->base_dim = static_cast<int>(impl->legs[0].point(domain.a).size());
  impl_ = std::move(impl);
}

Path Path::from_legs(std::vector<Leg> legs, std::string label) {
  if (legs.empty()) throw std::invalid_argument("Path: no legs");
  for (std::size_t i = 0; i < legs.size(); ++i) {
    require_interval(legs[i].range, "Path leg");
    if (!legs[i].point || !legs[i].velocity)
      throw std::invalid_argument("Path: null point or velocity map");
    if (i > 0 && std::abs(legs[i].range.a - legs[i - 1].range.b) > 0.0)
      throw std::invalid_argument("Path: leg ranges not contiguous");
  }
  auto impl = std::make_shared<Impl>();
  impl->domain = Interval{legs.front().range.a, legs.back().range.b};
  impl->legs = std::move(legs);
  impl->label = std::move(label);
  impl->base_dim = static_cast<int>(impl->legs[0].point(impl->domain.a).size());
  return Path(std::move(impl));
}

Path Path::segment(const Vec& x, const Vec& y, std::string label) {
  if (x.size() != y.size()) throw std::invalid_argument("Path::segment: dim mismatch");
  const Vec d = y - x;
  return Path(Interval{0.0, 1.0}, [x, d](double s) -> Vec { return x + s * d; },
              [d](double) -> Vec { return d; }, std::move(label));
}

Path Path::polyline(const std::vector<Vec>& nodes, std::string label) {
  if (nodes.size() < 2) throw std::invalid_argument("Path::polyline: needs >= 2 nodes");
  std::vector<Leg> legs;
  for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
    if (nodes[k].size() != nodes[k + 1].size())
      throw std::invalid_argument("Path::polyline: dim mismatch");
    const Vec x = nodes[k];
    const Vec d = nodes[k + 1] - nodes[k];
    const double a = static_cast<double>(k);
    legs.push_back(Leg{Interval{a, a + 1.0},
                       [x, d, a](double s) -> Vec { return x + (s - a) * d; },
                       [d](double) -> Vec { return d; }});
  }
  return from_legs(std::move(legs), std::move(label));
}

Path Path::quadratic_arc(const Vec& x, const Vec& via, const Vec& y, std::string label) {
  if (x.size() != via.size() || x.size() != y.size())
    throw std::invalid_argument("Path::quadratic_arc: dim mismatch");
  return Path(
      Interval{0.0, 1.0},
      [x, via, y](double s) -> Vec {
        const double u = 1.0 - s;
        return u * u * x + 2.0 * u * s * via + s * s * y;
      },
      [x, via, y](double s) -> Vec {
        return 2.0 * (1.0 - s) * (via - x) + 2.0 * s * (y - via);
      },
      std::move(label));
}

const Interval& Path::domain() const { return impl_->domain; }
int Path::base_dim() const { return impl_->base_dim; }
const std::string& Path::label() const { return impl_->label; }
int Path::leg_count() const { return static_cast<int>(impl_->legs.size()); }

void Path::require_param(double s, const char* what) const {
  if (!impl_->domain.contains(s)) out_of_domain(what, s, impl_->domain);
}

Vec Path::point(double s) const {
  require_param(s, "Path::point");
  const Leg& leg = impl_->legs[impl_->leg_index(s)];
  return leg.point(s);
}

Vec Path::velocity(double s) const {
  require_param(s, "Path::velocity");
  const Leg& leg = impl_->legs[impl_->leg_index(s)];
  return leg.velocity(s);
}

Path Path::leg(int k) const {
  if (k < 0 || k >= leg_count()) throw std::invalid_argument("Path::leg: index out of range");
  const Leg& l = impl_->legs[k];
  return Path(l.range, l.point, l.velocity, impl_->label);
}

std::vector<double> Path::interior_breaks() const {
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < impl_->legs.size(); ++i)
    out.push_back(impl_->legs[i].range.b);
  return out;
}

Path Path::reparametrized(double c, double d, std::string label) const {
  if (!(c < d)) throw std::invalid_argument("Path::reparametrized: needs c < d");
  const Interval dom = impl_->domain;
  const double rate = dom.length() / (d - c);
  std::vector<Leg> legs;
  for (const Leg& l : impl_->legs) {
    const auto to_old = [dom, c, rate](double u) { return dom.a + (u - c) * rate; };
    const double na = c + (l.range.a - dom.a) / rate;
    const double nb = c + (l.range.b - dom.a) / rate;
    auto p = l.point;
    auto v = l.velocity;
    legs.push_back(Leg{Interval{na, nb},
                       [p, to_old](double u) -> Vec { return p(to_old(u)); },
                       [v, rate, to_old](double u) -> Vec { return rate * v(to_old(u)); }});
  }
  return from_legs(std::move(legs), label.empty() ? impl_->label : std::move(label));
}

double path_velocity_defect(const Path& path, int samples) {
  const Interval dom = path.domain();
  const double h = 1e-4 * dom.length();
  const std::vector<double> breaks = path.interior_breaks();
  double worst = 0.0;
  for (int i = 1; i <= samples; ++i) {
    const double s = dom.a + dom.length() * i / (samples + 1.0);
    if (s - 2.0 * h < dom.a || s + 2.0 * h > dom.b) continue;
    const bool near_break = std::any_of(breaks.begin(), breaks.end(), [&](double br) {
      return std::abs(s - br) < 4.0 * h;
    });
    if (near_break) continue;
    const Vec v = path.velocity(s);
    const Vec fd = (path.point(s + h) - path.point(s - h)) / (2.0 * h);
    worst = std::max(worst, (v - fd).norm() / (1.0 + v.norm()));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Family

struct Family::Impl {
  Interval sd, td;
  Fn2 point, ds, dt, dst;
  std::string label;
};

Family::Family(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

Family::Family(Interval s_domain, Interval t_domain, Fn2 point, Fn2 d_s, Fn2 d_t,
               std::string label) {
  require_interval(s_domain, "Family s-domain");
  require_interval(t_domain, "Family t-domain");
  if (!point || !d_s || !d_t)
    throw std::invalid_argument("Family: null point or partial map");
  auto impl = std::make_shared<Impl>();
  impl->sd = s_domain;
  impl->td = t_domain;
  impl->point = std::move(point);
  impl->ds = std::move(d_s);
  impl->dt = std::move(d_t);
  impl->label = std::move(label);
  impl_ = std::move(impl);
}

Family Family::with_mixed_partial(Fn2 d_st) const {
  auto impl = std::make_shared<Impl>(*impl_);
  impl->dst = std::move(d_st);
  return Family(std::move(impl));
}

const Interval& Family::s_domain() const { return impl_->sd; }
const Interval& Family::t_domain() const { return impl_->td; }
const std::string& Family::label() const { return impl_->label; }
bool Family::has_mixed_partial() const { return static_cast<bool>(impl_->dst); }

void Family::require_params(double s, double t, const char* what) const {
  if (!impl_->sd.contains(s)) out_of_domain(what, s, impl_->sd);
  if (!impl_->td.contains(t)) out_of_domain(what, t, impl_->td);
}

Vec Family::point(double s, double t) const {
  require_params(s, t, "Family::point");
  return impl_->point(s, t);
}
Vec Family::d_s(double s, double t) const {
  require_params(s, t, "Family::d_s");
  return impl_->ds(s, t);
}
Vec Family::d_t(double s, double t) const {
  require_params(s, t, "Family::d_t");
  return impl_->dt(s, t);
}
Vec Family::d_st(double s, double t) const {
  if (!impl_->dst) throw std::logic_error("Family::d_st: no mixed partial declared");
  require_params(s, t, "Family::d_st");
  return impl_->dst(s, t);
}

int Family::base_dim() const {
  return static_cast<int>(impl_->point(impl_->sd.a, impl_->td.a).size());
}

Path extract_row_path(const Family& family, double t) {
  family.require_params(family.s_domain().a, t, "extract_row_path");
  return Path(family.s_domain(),
              [family, t](double s) -> Vec { return family.point(s, t); },
              [family, t](double s) -> Vec { return family.d_s(s, t); },
              family.label() + "/row(t=" + format_double(t) + ")");
}

Path extract_col_path(const Family& family, double s) {
  family.require_params(s, family.t_domain().a, "extract_col_path");
  return Path(family.t_domain(),
              [family, s](double t) -> Vec { return family.point(s, t); },
              [family, s](double t) -> Vec { return family.d_t(s, t); },
              family.label() + "/col(s=" + format_double(s) + ")");
}

// ---------------------------------------------------------------------------
// MultiFamily

struct MultiFamily::Impl {
  std::vector<Interval> domain;
  PointFn point;
  PartialFn partial;
  SecondPartialFn second;
  std::vector<double> base;
  std::string label;
};

MultiFamily::MultiFamily(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

MultiFamily::MultiFamily(std::vector<Interval> domain, PointFn point, PartialFn partial,
                         std::vector<double> basepoint, std::string label) {
  if (domain.size() < 2) throw std::invalid_argument("MultiFamily: needs k >= 2");
  for (const Interval& iv : domain) require_interval(iv, "MultiFamily domain");
  if (!point || !partial) throw std::invalid_argument("MultiFamily: null maps");
  if (basepoint.size() != domain.size())
    throw std::invalid_argument("MultiFamily: basepoint arity mismatch");
  for (std::size_t a = 0; a < domain.size(); ++a)
    if (!domain[a].contains(basepoint[a]))
      out_of_domain("MultiFamily basepoint", basepoint[a], domain[a]);
  auto impl = std::make_shared<Impl>();
  impl->domain = std::move(domain);
  impl->point = std::move(point);
  impl->partial = std::move(partial);
  impl->base = std::move(basepoint);
  impl->label = std::move(label);
  impl_ = std::move(impl);
}

MultiFamily MultiFamily::with_second_partial(SecondPartialFn second) const {
  auto impl = std::make_shared<Impl>(*impl_);
  impl->second = std::move(second);
  return MultiFamily(std::move(impl));
}

MultiFamily MultiFamily::with_basepoint(std::vector<double> basepoint) const {
  if (basepoint.size() != impl_->domain.size())
    throw std::invalid_argument("MultiFamily: basepoint arity mismatch");
  for (std::size_t a = 0; a < basepoint.size(); ++a)
    if (!impl_->domain[a].contains(basepoint[a]))
      out_of_domain("MultiFamily basepoint", basepoint[a], impl_->domain[a]);
  auto impl = std::make_shared<Impl>(*impl_);
  impl->base = std::move(basepoint);
  return MultiFamily(std::move(impl));
}

int MultiFamily::k() const { return static_cast<int>(impl_->domain.size()); }
const std::vector<Interval>& MultiFamily::domain() const { return impl_->domain; }
const std::vector<double>& MultiFamily::basepoint() const { return impl_->base; }
const std::string& MultiFamily::label() const { return impl_->label; }

Vec MultiFamily::point(const std::vector<double>& s) const { return impl_->point(s); }
Vec MultiFamily::partial(int a, const std::vector<double>& s) const {
  if (a < 0 || a >= k()) throw std::invalid_argument("MultiFamily::partial: index out of range");
  return impl_->partial(a, s);
}

Path MultiFamily::axis_path(int a) const {
  if (a < 0 || a >= k()) throw std::invalid_argument("MultiFamily::axis_path: index out of range");
  auto impl = impl_;
  return Path(impl->domain[a],
              [impl, a](double sigma) -> Vec {
                std::vector<double> s = impl->base;
                s[a] = sigma;
                return impl->point(s);
              },
              [impl, a](double sigma) -> Vec {
                std::vector<double> s = impl->base;
                s[a] = sigma;
                return impl->partial(a, s);
              },
              impl->label + "/axis(" + std::to_string(a) + ")");
}

Family extract_pair_family(const MultiFamily& mf, int a, int b) {
  const int k = mf.k();
  if (a < 0 || a >= k || b < 0 || b >= k)
    throw std::invalid_argument("extract_pair_family: index out of range");
  if (a == b) throw std::invalid_argument("extract_pair_family: indices must differ");
  auto impl = mf.impl_;
  Family fam(impl->domain[a], impl->domain[b],
             [impl, a, b](double s1, double s2) -> Vec {
               std::vector<double> s = impl->base;
               s[a] = s1;
               s[b] = s2;
               return impl->point(s);
             },
             [impl, a, b](double s1, double s2) -> Vec {
               std::vector<double> s = impl->base;
               s[a] = s1;
               s[b] = s2;
               return impl->partial(a, s);
             },
             [impl, a, b](double s1, double s2) -> Vec {
               std::vector<double> s = impl->base;
               s[a] = s1;
               s[b] = s2;
               return impl->partial(b, s);
             },
             impl->label + "/pair(" + std::to_string(a) + "," + std::to_string(b) + ")");
  if (impl->second) {
    fam = fam.with_mixed_partial([impl, a, b](double s1, double s2) -> Vec {
      std::vector<double> s = impl->base;
      s[a] = s1;
      s[b] = s2;
      return impl->second(a, b, s);
    });
  }
  return fam;
}

// ---------------------------------------------------------------------------
// Sections

Section::Section(std::function<Vec(double)> components, std::function<Vec(double)> derivative)
    : comp_(std::move(components)), deriv_(std::move(derivative)) {
  if (!comp_) throw std::invalid_argument("Section: null components");
}
Vec Section::components(double s) const { return comp_(s); }
bool Section::has_derivative() const { return static_cast<bool>(deriv_); }
Vec Section::derivative(double s) const {
  if (!deriv_) throw std::logic_error("Section::derivative: no analytic derivative");
  return deriv_(s);
}

FamilySection::FamilySection(Fn2 components, Fn2 d_s, Fn2 d_t)
    : comp_(std::move(components)), ds_(std::move(d_s)), dt_(std::move(d_t)) {
  if (!comp_) throw std::invalid_argument("FamilySection: null components");
}
Vec FamilySection::components(double s, double t) const { return comp_(s, t); }
bool FamilySection::has_d_s() const { return static_cast<bool>(ds_); }
bool FamilySection::has_d_t() const { return static_cast<bool>(dt_); }
Vec FamilySection::d_s(double s, double t) const {
  if (!ds_) throw std::logic_error("FamilySection::d_s: no analytic partial");
  return ds_(s, t);
}
Vec FamilySection::d_t(double s, double t) const {
  if (!dt_) throw std::logic_error("FamilySection::d_t: no analytic partial");
  return dt_(s, t);
}

// ---------------------------------------------------------------------------
// CoefficientProvider

struct CoefficientProvider::Impl {
  BundleChart chart;
  bool connection = false;
  Gamma3Fn gamma3;
  Gamma3GradFn gamma3_grad;
  CoeffFn coeff;
  CoeffFn d_coeff;
  std::string name;
};

CoefficientProvider::CoefficientProvider(std::shared_ptr<const Impl> impl)
    : impl_(std::move(impl)) {}

CoefficientProvider CoefficientProvider::connection_induced(BundleChart chart, Gamma3Fn gamma3,
                                                            std::string name,
                                                            Gamma3GradFn gamma3_grad) {
  if (chart.base_dim < 1 || chart.fibre_dim < 1)
    throw std::invalid_argument("CoefficientProvider: chart dims must be >= 1");
  if (!gamma3) throw std::invalid_argument("CoefficientProvider: null coefficient array");
  auto impl = std::make_shared<Impl>();
  impl->chart = chart;
  impl->connection = true;
  impl->gamma3 = std::move(gamma3);
  impl->gamma3_grad = std::move(gamma3_grad);
  impl->name = std::move(name);
  return CoefficientProvider(std::move(impl));
}

CoefficientProvider CoefficientProvider::path_functional(BundleChart chart, CoeffFn coeff,
                                                         std::string name, CoeffFn d_coeff) {
  if (chart.base_dim < 1 || chart.fibre_dim < 1)
    throw std::invalid_argument("CoefficientProvider: chart dims must be >= 1");
  if (!coeff) throw std::invalid_argument("CoefficientProvider: null coefficient map");
  auto impl = std::make_shared<Impl>();
  impl->chart = chart;
  impl->connection = false;
  impl->coeff = std::move(coeff);
  impl->d_coeff = std::move(d_coeff);
  impl->name = std::move(name);
  return CoefficientProvider(std::move(impl));
}

const BundleChart& CoefficientProvider::chart() const { return impl_->chart; }
int CoefficientProvider::fibre_dim() const { return impl_->chart.fibre_dim; }
int CoefficientProvider::base_dim() const { return impl_->chart.base_dim; }
const std::string& CoefficientProvider::name() const { return impl_->name; }
bool CoefficientProvider::is_connection_induced() const { return impl_->connection; }
bool CoefficientProvider::has_gamma3_grad() const {
  return static_cast<bool>(impl_->gamma3_grad);
}
bool CoefficientProvider::has_analytic_param_derivative() const {
  return static_cast<bool>(impl_->d_coeff);
}

Gamma3 CoefficientProvider::gamma3(const Vec& x) const {
  if (!impl_->connection)
    throw std::logic_error("CoefficientProvider::gamma3: not connection-induced");
  Gamma3 g = impl_->gamma3(x);
  if (static_cast<int>(g.by_direction.size()) != impl_->chart.base_dim)
    throw std::invalid_argument("CoefficientProvider: coefficient array has wrong direction count");
  return g;
}

Gamma3Grad CoefficientProvider::gamma3_grad(const Vec& x) const {
  if (!impl_->gamma3_grad)
    throw std::logic_error("CoefficientProvider::gamma3_grad: no gradient declared");
  return impl_->gamma3_grad(x);
}

Mat CoefficientProvider::coeff(const Path& path, double s) const {
  const int n = impl_->chart.fibre_dim;
  Mat out;
  if (impl_->connection) {
    const Vec x = path.point(s);
    const Vec v = path.velocity(s);
    if (v.size() != impl_->chart.base_dim)
      throw std::invalid_argument("CoefficientProvider: path dim mismatch");
    const Gamma3 g = gamma3(x);
    out = Mat::Zero(n, n);
    for (int k = 0; k < impl_->chart.base_dim; ++k) {
      if (g.by_direction[k].rows() != n || g.by_direction[k].cols() != n)
        throw std::invalid_argument("CoefficientProvider: coefficient block has wrong shape");
      out += v[k] * g.by_direction[k];
    }
  } else {
    out = impl_->coeff(path, s);
    if (out.rows() != n || out.cols() != n)
      throw std::invalid_argument("CoefficientProvider: coefficient matrix has wrong shape");
  }
  return out;
}

Mat CoefficientProvider::coeff_param_derivative(const Path& path, double s) const {
  if (impl_->d_coeff) return impl_->d_coeff(path, s);
  const double h = std::max(1e-6, 1e-6 * std::abs(s));
  auto f = [this, &path](double u) { return coeff(path, u); };
  return fd_derivative1_central(f, s, h, path.domain());
}

// ---------------------------------------------------------------------------
// FrameMap / FrameField

struct FrameMap::Impl {
  int n;
  FrameFn frame, d_frame;
  std::string name;
};

FrameMap::FrameMap(int fibre_dim, FrameFn frame, FrameFn d_frame, std::string name) {
  if (fibre_dim < 1) throw std::invalid_argument("FrameMap: fibre_dim must be >= 1");
  if (!frame) throw std::invalid_argument("FrameMap: null frame map");
  auto impl = std::make_shared<Impl>();
  impl->n = fibre_dim;
  impl->frame = std::move(frame);
  impl->d_frame = std::move(d_frame);
  impl->name = std::move(name);
  impl_ = std::move(impl);
}

int FrameMap::fibre_dim() const { return impl_->n; }
const std::string& FrameMap::name() const { return impl_->name; }

Mat FrameMap::frame(const Path& path, double s) const {
  Mat f = impl_->frame(path, s);
  if (f.rows() != impl_->n || f.cols() != impl_->n)
    throw std::invalid_argument("FrameMap: frame has wrong shape");
  require_finite(f, "FrameMap::frame");
  return f;
}

bool FrameMap::has_d_frame() const { return static_cast<bool>(impl_->d_frame); }

Mat FrameMap::d_frame(const Path& path, double s) const {
  if (!impl_->d_frame) throw std::logic_error("FrameMap::d_frame: no analytic derivative");
  return impl_->d_frame(path, s);
}

FrameField::FrameField(std::function<Mat(const Vec&)> basis_at, std::string name)
    : basis_(std::move(basis_at)), name_(std::move(name)) {
  if (!basis_) throw std::invalid_argument("FrameField: null basis map");
}

Mat FrameField::basis_at(const Vec& x) const {
  Mat b = basis_(x);
  require_finite(b, "FrameField::basis_at");
  const double cond = condition_number(b);
  if (cond > kConditionLimit)
    throw numeric_error("FrameField::basis_at: basis condition number " + format_double(cond) +
                        " exceeds " + format_double(kConditionLimit));
  return b;
}

const std::string& FrameField::name() const { return name_; }

double condition_number(const Mat& m) {
  Eigen::JacobiSVD<Mat> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0) return std::numeric_limits<double>::infinity();
  const double smin = sv(sv.size() - 1);
  if (smin <= 0.0) return std::numeric_limits<double>::infinity();
  return sv(0) / smin;
}

}  // namespace ltp
