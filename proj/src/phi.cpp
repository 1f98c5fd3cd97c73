#include "wehrl/phi.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace wehrl {

namespace {

std::string format_number(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

double parse_number(const std::string& s, const std::string& what) {
  double x = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto res = std::from_chars(first, last, x);
  if (res.ec != std::errc() || res.ptr != last || s.empty())
    throw std::invalid_argument("phi spec: cannot parse " + what + " from '" + s + "'");
  return x;
}

std::optional<Interval> intersect(const std::optional<Interval>& a, double lo, double hi) {
  if (!a) return std::nullopt;
  const double l = std::max(a->lo, lo), h = std::min(a->hi, hi);
  if (l >= h) return std::nullopt;
  return Interval{l, h};
}

std::vector<DensityPiece> clip_pieces(const std::vector<DensityPiece>& pieces, double lo,
                                      double hi) {
  std::vector<DensityPiece> out;
  for (const auto& p : pieces) {
    const double l = std::max(p.lo, lo), h = std::min(p.hi, hi);
    if (l < h) out.push_back({l, h, p.density});
  }
  return out;
}

// Normalisation of exp(-1/(1-x^2)) on [-1, 1].
double bump_mass() {
  static const double mass = [] {
    const double breaks[] = {-0.5, 0.0, 0.5};
    return integrate_gl_split([](double x) { return std::exp(-1.0 / (1.0 - x * x)); }, -1.0,
                              1.0, breaks, 64);
  }();
  return mass;
}

constexpr int kMollifierPanelNodes = 48;

}  // namespace

ConvexPhi::ConvexPhi(std::string id, RealFn value, RealFn d_left, RealFn d_right,
                     std::vector<DensityPiece> pieces, std::vector<Atom> atoms,
                     std::optional<Interval> strict_interval)
    : state_(std::make_shared<const State>(State{std::move(id), std::move(value),
                                                 std::move(d_left), std::move(d_right),
                                                 std::move(pieces), std::move(atoms),
                                                 strict_interval})) {}

double ConvexPhi::operator()(double t) const {
  if (t < 0.0) return state_->value(0.0) + state_->d_right(0.0) * t;
  if (t > 1.0) return state_->value(1.0) + state_->d_left(1.0) * (t - 1.0);
  return state_->value(t);
}

double ConvexPhi::d_left(double t) const {
  if (t <= 0.0) return state_->d_right(0.0);
  if (t > 1.0) return state_->d_left(1.0);
  return state_->d_left(t);
}

double ConvexPhi::d_right(double t) const {
  if (t < 0.0) return state_->d_right(0.0);
  if (t >= 1.0) return state_->d_left(1.0);
  return state_->d_right(t);
}

std::optional<Interval> ConvexPhi::support() const {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& p : state_->pieces) {
    lo = std::min(lo, p.lo);
    hi = std::max(hi, p.hi);
  }
  for (const auto& a : state_->atoms) {
    if (a.weight == 0.0) continue;
    lo = std::min(lo, a.position);
    hi = std::max(hi, a.position);
  }
  if (lo > hi) return std::nullopt;
  return Interval{lo, hi};
}

std::vector<double> ConvexPhi::breakpoints() const {
  std::vector<double> out;
  for (const auto& p : state_->pieces) {
    out.push_back(p.lo);
    out.push_back(p.hi);
  }
  for (const auto& a : state_->atoms) out.push_back(a.position);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double ConvexPhi::density(double t) const {
  double acc = 0.0;
  for (const auto& p : state_->pieces)
    if (t > p.lo && t < p.hi) acc += p.density(t);
  return acc;
}

ConvexPhi pow_phi(double p) {
  if (!(p > 1.0)) throw std::invalid_argument("pow_phi: exponent must be > 1");
  auto value = [p](double t) { return std::pow(t, p); };
  auto deriv = [p](double t) { return t <= 0.0 ? 0.0 : p * std::pow(t, p - 1.0); };
  auto dens = [p](double t) { return p * (p - 1.0) * std::pow(t, p - 2.0); };
  return ConvexPhi("pow:" + format_number(p), value, deriv, deriv, {{0.0, 1.0, dens}}, {},
                   Interval{0.0, 1.0});
}

ConvexPhi xlogx_phi() {
  auto value = [](double t) { return t <= 0.0 ? 0.0 : t * std::log(t); };
  auto deriv = [](double t) {
    return t <= 0.0 ? -std::numeric_limits<double>::infinity() : std::log(t) + 1.0;
  };
  auto dens = [](double t) { return 1.0 / t; };
  return ConvexPhi("xlogx", value, deriv, deriv, {{0.0, 1.0, dens}}, {}, Interval{0.0, 1.0});
}

ConvexPhi hinge_phi(double T) {
  if (!(T > 0.0 && T < 1.0)) throw std::invalid_argument("hinge_phi: T must lie in (0, 1)");
  auto value = [T](double t) { return std::max(0.0, t - T); };
  auto dl = [T](double t) { return t > T ? 1.0 : 0.0; };
  auto dr = [T](double t) { return t >= T ? 1.0 : 0.0; };
  return ConvexPhi("hinge:" + format_number(T), value, dl, dr, {}, {{T, 1.0}});
}

ConvexPhi affine_phi(double slope, double intercept) {
  auto value = [slope, intercept](double t) { return slope * t + intercept; };
  auto deriv = [slope](double) { return slope; };
  return ConvexPhi("affine:" + format_number(slope) + "," + format_number(intercept), value,
                   deriv, deriv, {}, {});
}

ConvexPhi builtin_phi(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string head = spec.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
  auto need_args = [&] {
    if (colon == std::string::npos || rest.empty())
      throw std::invalid_argument("phi spec '" + spec + "': missing arguments");
  };
  if (head == "xlogx") {
    if (colon != std::string::npos) throw std::invalid_argument("phi spec: xlogx takes no arguments");
    return xlogx_phi();
  }
  if (head == "pow") {
    need_args();
    return pow_phi(parse_number(rest, "exponent"));
  }
  if (head == "hinge") {
    need_args();
    return hinge_phi(parse_number(rest, "threshold"));
  }
  if (head == "affcont") {
    need_args();
    const auto c1 = rest.find(',');
    const auto c2 = c1 == std::string::npos ? c1 : rest.find(',', c1 + 1);
    if (c2 == std::string::npos)
      throw std::invalid_argument("phi spec: affcont:<a>,<b>,<inner> expected");
    const double a = parse_number(rest.substr(0, c1), "a");
    const double b = parse_number(rest.substr(c1 + 1, c2 - c1 - 1), "b");
    return affine_continuation(builtin_phi(rest.substr(c2 + 1)), a, b);
  }
  if (head == "mollify") {
    need_args();
    const auto c1 = rest.find(',');
    if (c1 == std::string::npos)
      throw std::invalid_argument("phi spec: mollify:<eta>,<inner> expected");
    const double eta = parse_number(rest.substr(0, c1), "eta");
    const ConvexPhi inner = builtin_phi(rest.substr(c1 + 1));
    const auto supp = inner.support();
    if (!supp) return inner;
    return mollify(inner, supp->lo, supp->hi, eta);
  }
  throw std::invalid_argument("unknown phi spec '" + spec + "'");
}

std::pair<ConvexPhi, ConvexPhi> hinge_split(const ConvexPhi& phi, double T) {
  if (!(T > 0.0 && T < 1.0)) throw std::invalid_argument("hinge_split: T must lie in (0, 1)");
  const double slope = phi.d_left(T);
  const double at_T = phi(T);
  std::vector<Atom> below, above;
  for (const auto& a : phi.atoms()) (a.position < T ? below : above).push_back(a);

  ConvexPhi first(
      phi.id() + "|below:" + format_number(T),
      [=](double t) { return t <= T ? phi(t) : slope * (t - T) + at_T; },
      [=](double t) { return t <= T ? phi.d_left(t) : slope; },
      [=](double t) { return t < T ? phi.d_right(t) : slope; },
      clip_pieces(phi.pieces(), -std::numeric_limits<double>::infinity(), T), below,
      intersect(phi.strict_interval(), 0.0, T));
  ConvexPhi second(
      phi.id() + "|above:" + format_number(T),
      [=](double t) { return t <= T ? 0.0 : phi(t) - (slope * (t - T) + at_T); },
      [=](double t) { return t <= T ? 0.0 : phi.d_left(t) - slope; },
      [=](double t) { return t < T ? 0.0 : phi.d_right(t) - slope; },
      clip_pieces(phi.pieces(), T, std::numeric_limits<double>::infinity()), above,
      intersect(phi.strict_interval(), T, 1.0));
  return {first, second};
}

ConvexPhi affine_continuation(const ConvexPhi& phi, double a, double b) {
  if (!(a < b)) throw std::invalid_argument("affine_continuation: need a < b");
  if (!(a > 0.0 && b < 1.0)) throw std::invalid_argument("affine_continuation: need 0 < a < b < 1");
  const double slope_a = phi.d_right(a), at_a = phi(a);
  const double slope_b = phi.d_left(b), at_b = phi(b);
  std::vector<Atom> atoms;
  for (const auto& at : phi.atoms())
    if (at.position > a && at.position < b) atoms.push_back(at);
  return ConvexPhi(
      "affcont:" + format_number(a) + "," + format_number(b) + "," + phi.id(),
      [=](double t) {
        if (t < a) return slope_a * (t - a) + at_a;
        if (t > b) return slope_b * (t - b) + at_b;
        return phi(t);
      },
      [=](double t) { return t <= a ? slope_a : (t > b ? slope_b : phi.d_left(t)); },
      [=](double t) { return t < a ? slope_a : (t >= b ? slope_b : phi.d_right(t)); },
      clip_pieces(phi.pieces(), a, b), atoms, intersect(phi.strict_interval(), a, b));
}

double mollifier_kernel(double x) {
  if (x <= -1.0 || x >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - x * x)) / bump_mass();
}

ConvexPhi mollify(const ConvexPhi& phi, double a, double b, double eta) {
  if (a > b) throw std::invalid_argument("mollify: need a <= b");
  if (!(eta > 0.0)) throw std::invalid_argument("mollify: eta must be positive");
  if (!(eta < std::min(a, 1.0 - b) / 2.0))
    throw std::invalid_argument("mollify: eta too large for [a, b]");
  if (const auto supp = phi.support(); supp && (supp->lo < a || supp->hi > b))
    throw std::invalid_argument("mollify: phi is not affine outside [a, b]");

  const std::vector<double> inner_breaks = phi.breakpoints();
  // Integrate f(t - eta x) rho(x) over [-1, 1], split where f has kinks.
  auto convolve = [phi, inner_breaks, eta](const RealFn& f, double t) {
    std::vector<double> xs{-0.5, 0.0, 0.5};
    for (double p : inner_breaks) xs.push_back((t - p) / eta);
    return integrate_gl_split([&](double x) { return f(t - eta * x) * mollifier_kernel(x); },
                              -1.0, 1.0, xs, kMollifierPanelNodes);
  };
  auto value = [phi, convolve](double t) {
    return convolve([&](double s) { return phi(s); }, t);
  };
  auto deriv = [phi, convolve](double t) {
    return convolve([&](double s) { return phi.d_right(s); }, t);
  };
  auto dens = [phi, convolve, eta](double t) {
    double acc = 0.0;
    for (const auto& at : phi.atoms()) acc += at.weight * mollifier_kernel((t - at.position) / eta) / eta;
    if (!phi.pieces().empty()) acc += convolve([&](double s) { return phi.density(s); }, t);
    return acc;
  };
  std::vector<DensityPiece> pieces;
  if (phi.support()) pieces.push_back({a - eta, b + eta, dens});
  return ConvexPhi("mollify:" + format_number(eta) + "," + phi.id(), value, deriv, deriv,
                   std::move(pieces), {});
}

Estimate integrate_against_second_derivative(const ConvexPhi& phi, const RealFn& g, double lo,
                                             double hi, double tol) {
  Estimate total;
  for (const auto& at : phi.atoms())
    if (at.position >= lo && at.position <= hi) total.value += at.weight * g(at.position);
  for (const auto& p : phi.pieces()) {
    const double l = std::max(lo, p.lo), h = std::min(hi, p.hi);
    if (!(l < h)) continue;
    const auto e = integrate_ts([&](double t) { return p.density(t) * g(t); }, l, h, tol);
    total.value += e.value;
    total.error += e.error;
  }
  return total;
}

double convexity_violation(const ConvexPhi& phi, int n) {
  if (n < 3) throw std::invalid_argument("convexity_violation: need n >= 3");
  const double eps = std::numeric_limits<double>::epsilon();
  // Spacings are taken from the rounded grid points themselves.
  double x0 = 0.0, x1 = 1.0 / (n - 1);
  double f0 = phi(x0), f1 = phi(x1);
  double worst = -std::numeric_limits<double>::infinity();
  for (int i = 2; i < n; ++i) {
    const double x2 = static_cast<double>(i) / (n - 1);
    const double f2 = phi(x2);
    const double h0 = x1 - x0, h1 = x2 - x1;
    // Rounding of the three values alone moves the quotient gap by up to this.
    const double floor = 2.0 * eps * ((std::abs(f0) + std::abs(f1)) / h0 + (std::abs(f1) + std::abs(f2)) / h1);
    worst = std::max(worst, (f1 - f0) / h0 - (f2 - f1) / h1 - floor);
    x0 = x1;
    x1 = x2;
    f0 = f1;
    f1 = f2;
  }
  return worst;
}

}  // namespace wehrl
