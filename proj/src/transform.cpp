#include "sga/transform.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

#include "sga/errors.hpp"

namespace sga::transform {

namespace {

using std::numbers::pi;

const double kInverseConstant = 1.0 / (16.0 * pi * pi * pi);

Vec3 scale3(const Vec3 &v, double s) { return {v[0] * s, v[1] * s, v[2] * s}; }
Vec3 add3(const Vec3 &a, const Vec3 &b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
Vec3 sub3(const Vec3 &a, const Vec3 &b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

// name(p1,p2,...) with shortest round-trip numbers.
std::string with_params(const std::string &name, std::initializer_list<double> ps) {
  std::string out = name + "(";
  bool first = true;
  for (double p : ps) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, p);
    out += (first ? "" : ",") + std::string(buf, res.ptr);
    first = false;
  }
  return out + ")";
}
Vec3 cross3(const Vec3 &a, const Vec3 &b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

struct Frame {
  Vec3 n, e1, e2;
};

Frame frame_for(const Vec3 &n) {
  const Vec3 a = std::abs(n[0]) < 0.9 ? Vec3{1.0, 0.0, 0.0} : Vec3{0.0, 1.0, 0.0};
  Vec3 e1 = cross3(n, a);
  e1 = scale3(e1, 1.0 / norm3(e1));
  return {n, e1, cross3(n, e1)};
}

// x = r (c n + sqrt(1 - c^2) (cos a e1 + sin a e2)), averaged over a with
// the uniform rule.
cplx azimuthal_sum(const HyperFunction &f, const Frame &fr, double r, double c,
                   const std::vector<double> &cos_a, const std::vector<double> &sin_a) {
  c = std::clamp(c, -1.0, 1.0);
  const double st = std::sqrt(std::max(0.0, 1.0 - c * c));
  const Vec3 axis = scale3(fr.n, r * c);
  cplx s{0.0, 0.0};
  for (std::size_t k = 0; k < cos_a.size(); ++k) {
    const Vec3 radial = add3(scale3(fr.e1, cos_a[k]), scale3(fr.e2, sin_a[k]));
    s += f(add3(axis, scale3(radial, r * st)));
  }
  return s * (2.0 * pi / static_cast<double>(cos_a.size()));
}

struct Azimuth {
  std::vector<double> c, s;
  explicit Azimuth(int n) {
    for (int k = 0; k < n; ++k) {
      const double a = (k + 0.5) * 2.0 * pi / n;
      c.push_back(std::cos(a));
      s.push_back(std::sin(a));
    }
  }
};

// Terms c_i exp(i rho s_i) of int Dx f q^{-1+i rho} along direction n.
struct PhaseSum {
  std::vector<cplx> coef;
  std::vector<double> phase;
};

PhaseSum forward_terms(const HyperFunction &f, const Vec3 &n, double radius,
                       const QuadratureSpec &quad) {
  const Frame fr = frame_for(n);
  const Rule1D radial = gauss_legendre(quad.radial_nodes, 0.0, radius);
  const Rule1D polar = gauss_legendre(quad.polar_nodes, -1.0, 1.0);
  const Azimuth az(quad.azimuth_nodes);
  PhaseSum out;
  out.coef.reserve(radial.nodes.size() * polar.nodes.size());
  out.phase.reserve(out.coef.capacity());
  for (std::size_t a = 0; a < radial.nodes.size(); ++a) {
    const double r = radial.nodes[a];
    const double x4 = std::sqrt(1.0 + r * r);
    // log q runs over [-asinh r, asinh r] as c goes from -1 to 1.
    const double half = std::asinh(r);
    for (std::size_t b = 0; b < polar.nodes.size(); ++b) {
      const double s = half * polar.nodes[b];
      const double c = (std::exp(s) - x4) / r;
      const cplx avg = azimuthal_sum(f, fr, r, c, az.c, az.s);
      out.coef.push_back(radial.weights[a] * r / x4 * half * polar.weights[b] * avg);
      out.phase.push_back(s);
    }
  }
  return out;
}

bool uniform_symmetric(const std::vector<double> &g) {
  const std::size_t m = g.size();
  if (m < 2)
    return false;
  const double h = (g.back() - g.front()) / static_cast<double>(m - 1);
  for (std::size_t k = 0; k < m; ++k) {
    if (g[m - 1 - k] != -g[k])
      return false;
    if (std::abs(g[k] - (g.front() + h * static_cast<double>(k))) > 1e-9 * h)
      return false;
  }
  return true;
}

// out[m] += sum_i coef_i exp(i sign rho_m phase_i).
void accumulate(const PhaseSum &terms, const std::vector<double> &rho, double sign,
                std::vector<cplx> &out) {
  const std::size_t m_count = rho.size();
  if (uniform_symmetric(rho)) {
    const std::size_t first = m_count / 2;
    const double h = (rho.back() - rho.front()) / static_cast<double>(m_count - 1);
    for (std::size_t i = 0; i < terms.coef.size(); ++i) {
      const double s = sign * terms.phase[i];
      const cplx c = terms.coef[i];
      cplx z = std::polar(1.0, rho[first] * s);
      const cplx dz = std::polar(1.0, h * s);
      for (std::size_t m = first; m < m_count; ++m) {
        out[m] += c * z;
        const std::size_t mirror = m_count - 1 - m;
        if (mirror != m)
          out[mirror] += c * std::conj(z);
        z *= dz;
      }
    }
    return;
  }
  for (std::size_t i = 0; i < terms.coef.size(); ++i)
    for (std::size_t m = 0; m < m_count; ++m)
      out[m] += terms.coef[i] * std::polar(1.0, sign * rho[m] * terms.phase[i]);
}

std::vector<double> trapezoid_weights(const std::vector<double> &g) {
  std::vector<double> w(g.size(), 0.0);
  for (std::size_t m = 0; m + 1 < g.size(); ++m) {
    const double h = 0.5 * (g[m + 1] - g[m]);
    w[m] += h;
    w[m + 1] += h;
  }
  return w;
}

void tail_warning(double tail, const QuadratureSpec &quad, Diagnostics &diag) {
  if (tail > quad.tail_tolerance) {
    std::ostringstream s;
    s << "spectral tail mass " << tail << " exceeds " << quad.tail_tolerance
      << "; widen the rho window";
    diag.warnings.push_back(s.str());
  }
}

std::string format_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

double parse_double(const std::string &s) {
  double v = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size())
    throw ConfigError("spectral file: bad number '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string &line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(line);
  while (std::getline(in, cur, sep))
    out.push_back(cur);
  return out;
}

} // namespace

double HyperFunction::natural_radius() const {
  switch (decay) {
  case DecayClass::gaussian_damped:
    return norm3(center) + 6.0 * scale;
  case DecayClass::compact:
    return norm3(center) + scale;
  case DecayClass::generic:
    break;
  }
  return 8.0;
}

HyperFunction HyperFunction::scaled(cplx c) const {
  HyperFunction g = *this;
  const auto inner = eval;
  g.eval = [inner, c](const Vec3 &x) { return c * inner(x); };
  g.amplitude = amplitude * std::abs(c);
  g.real = real && c.imag() == 0.0;
  return g;
}

HyperFunction radial_gaussian(double s) {
  HyperFunction f = offcenter_gaussian({0.0, 0.0, 0.0}, s);
  f.name = with_params("gaussian", {s});
  return f;
}

HyperFunction offcenter_gaussian(const Vec3 &center, double s) {
  if (!(s > 0.0))
    throw DomainError("gaussian width must be positive");
  HyperFunction f;
  f.name = with_params("offcenter", {center[0], center[1], center[2], s});
  f.eval = [center, s](const Vec3 &x) {
    const Vec3 d = sub3(x, center);
    return cplx(std::exp(-dot3(d, d) / (2.0 * s * s)), 0.0);
  };
  f.decay = DecayClass::gaussian_damped;
  f.scale = s;
  f.center = center;
  f.real = true;
  return f;
}

HyperFunction modulated_gaussian(double s, const Vec3 &wave) {
  HyperFunction f = radial_gaussian(s);
  f.name = with_params("modulated", {s, wave[0], wave[1], wave[2]});
  f.eval = [s, wave](const Vec3 &x) {
    return std::exp(cplx(-dot3(x, x) / (2.0 * s * s), dot3(wave, x)));
  };
  f.real = false;
  return f;
}

HyperFunction compact_bump(const Vec3 &center, double a) {
  if (!(a > 0.0))
    throw DomainError("bump radius must be positive");
  HyperFunction f;
  f.name = with_params("bump", {center[0], center[1], center[2], a});
  f.eval = [center, a](const Vec3 &x) {
    const Vec3 d = sub3(x, center);
    const double u = dot3(d, d) / (a * a);
    if (u >= 1.0)
      return cplx(0.0, 0.0);
    return cplx(std::exp(1.0 - 1.0 / (1.0 - u)), 0.0);
  };
  f.decay = DecayClass::compact;
  f.scale = a;
  f.center = center;
  f.real = true;
  return f;
}

HyperFunction zero_function() {
  HyperFunction f;
  f.name = "zero";
  f.eval = [](const Vec3 &) { return cplx(0.0, 0.0); };
  f.decay = DecayClass::compact;
  f.amplitude = 0.0;
  f.scale = 1.0;
  f.real = true;
  return f;
}

HyperFunction builtin_function(const std::string &name, const std::vector<double> &params) {
  auto param = [&](std::size_t i, double fallback) {
    return i < params.size() ? params[i] : fallback;
  };
  std::size_t expected = 0;
  HyperFunction f;
  if (name == "gaussian") {
    expected = 1;
    f = radial_gaussian(param(0, 1.0));
  } else if (name == "offcenter") {
    expected = 4;
    f = offcenter_gaussian({param(0, 0.8), param(1, 0.0), param(2, 0.0)}, param(3, 0.7));
  } else if (name == "modulated") {
    expected = 4;
    f = modulated_gaussian(param(0, 0.8), {param(1, 1.5), param(2, 0.0), param(3, 0.0)});
  } else if (name == "bump") {
    expected = 4;
    f = compact_bump({param(0, 0.3), param(1, 0.0), param(2, 0.0)}, param(3, 1.2));
  } else if (name == "zero") {
    f = zero_function();
  } else {
    throw ConfigError("unknown test function '" + name + "'");
  }
  if (params.size() > expected)
    throw ConfigError("too many parameters for '" + name + "'");
  return f;
}

std::vector<HyperFunction> standard_suite() {
  return {builtin_function("gaussian", {1.0}), builtin_function("gaussian", {0.6}),
          builtin_function("offcenter"), builtin_function("modulated"),
          builtin_function("bump")};
}

std::vector<double> SpectralFunction::rho_weights() const { return trapezoid_weights(rho); }

double SpectralFunction::tail_mass() const {
  const auto w = rho_weights();
  const double edge = 0.9 * std::max(std::abs(rho.front()), std::abs(rho.back()));
  double total = 0.0, tail = 0.0;
  for (std::size_t m = 0; m < rho.size(); ++m) {
    double s = 0.0;
    for (std::size_t j = 0; j < directions(); ++j)
      s += sphere.weights[j] * std::norm(at(j, m));
    s *= w[m] * rho[m] * rho[m];
    total += s;
    if (std::abs(rho[m]) > edge)
      tail += s;
  }
  return total > 0.0 ? tail / total : 0.0;
}

SpectralFunction SpectralFunction::linear_combination(cplx a, const SpectralFunction &other,
                                                      cplx b) const {
  if (other.rho != rho || other.sphere.nodes != sphere.nodes)
    throw DomainError("spectral functions live on different grids");
  SpectralFunction out = *this;
  for (std::size_t i = 0; i < values.size(); ++i)
    out.values[i] = a * values[i] + b * other.values[i];
  out.source = "combination";
  out.real_source = false;
  return out;
}

void SpectralFunction::write_csv(std::ostream &out) const {
  out << "# sga spectral function v1\n";
  out << "# sphere_rule=" << sphere.id << "\n";
  out << "# sphere_exactness=" << sphere.exactness << "\n";
  out << "# directions=" << directions() << "\n";
  out << "# rho_min=" << format_double(rho.front()) << "\n";
  out << "# rho_max=" << format_double(rho.back()) << "\n";
  out << "# rho_count=" << rho.size() << "\n";
  out << "# sigma=-1\n";
  out << "# phase=(x.n+x4)^(-1+i*rho)\n";
  out << "# source=" << source << "\n";
  out << "# real_source=" << (real_source ? 1 : 0) << "\n";
  out << "j,m,n_x,n_y,n_z,weight,rho,re_phi,im_phi\n";
  for (std::size_t j = 0; j < directions(); ++j) {
    const Vec3 &n = sphere.nodes[j];
    const std::string prefix = format_double(n[0]) + "," + format_double(n[1]) + "," +
                               format_double(n[2]) + "," + format_double(sphere.weights[j]);
    for (std::size_t m = 0; m < rho.size(); ++m) {
      const cplx v = at(j, m);
      out << j << "," << m << "," << prefix << "," << format_double(rho[m]) << ","
          << format_double(v.real()) << "," << format_double(v.imag()) << "\n";
    }
  }
}

SpectralFunction SpectralFunction::read_csv(std::istream &in) {
  std::map<std::string, std::string> header;
  std::string line;
  bool columns = false;
  while (std::getline(in, line)) {
    if (line.rfind("# ", 0) == 0) {
      const auto eq = line.find('=');
      if (eq != std::string::npos)
        header[line.substr(2, eq - 2)] = line.substr(eq + 1);
      continue;
    }
    if (line.rfind("j,m,", 0) == 0) {
      columns = true;
      break;
    }
  }
  auto field = [&](const std::string &key) {
    const auto it = header.find(key);
    if (it == header.end())
      throw ConfigError("spectral file: missing header field " + key);
    return it->second;
  };
  if (!columns)
    throw ConfigError("spectral file: missing column line");
  if (field("sigma") != "-1")
    throw ConfigError("spectral file: unsupported sigma convention");
  SpectralFunction phi;
  phi.sphere.id = field("sphere_rule");
  phi.sphere.exactness = std::stoi(field("sphere_exactness"));
  phi.source = field("source");
  phi.real_source = field("real_source") == "1";
  const std::size_t nj = std::stoul(field("directions"));
  const std::size_t nm = std::stoul(field("rho_count"));
  phi.sphere.nodes.resize(nj);
  phi.sphere.weights.resize(nj);
  phi.rho.resize(nm);
  phi.values.resize(nj * nm);
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (line.empty())
      continue;
    const auto cells = split(line, ',');
    if (cells.size() != 9)
      throw ConfigError("spectral file: row with " + std::to_string(cells.size()) +
                        " fields");
    const std::size_t j = std::stoul(cells[0]);
    const std::size_t m = std::stoul(cells[1]);
    if (j >= nj || m >= nm)
      throw ConfigError("spectral file: index out of range");
    phi.sphere.nodes[j] = {parse_double(cells[2]), parse_double(cells[3]),
                           parse_double(cells[4])};
    phi.sphere.weights[j] = parse_double(cells[5]);
    phi.rho[m] = parse_double(cells[6]);
    phi.at(j, m) = {parse_double(cells[7]), parse_double(cells[8])};
    ++rows;
  }
  if (rows != nj * nm)
    throw ConfigError("spectral file: expected " + std::to_string(nj * nm) + " rows, got " +
                      std::to_string(rows));
  if (format_double(phi.rho.front()) != field("rho_min") ||
      format_double(phi.rho.back()) != field("rho_max"))
    throw ConfigError("spectral file: rho window does not match its header");
  return phi;
}

double truncation_radius(const HyperFunction &f, const QuadratureSpec &quad) {
  quad.validate();
  const double natural = f.natural_radius();
  if (quad.radius <= 0.0)
    return natural;
  const double R = quad.radius;
  const double reach = R - norm3(f.center);
  bool short_cut = false;
  if (f.decay == DecayClass::gaussian_damped) {
    const double tail = reach > 0.0 ? std::exp(-reach * reach / (2.0 * f.scale * f.scale)) : 1.0;
    short_cut = tail > 1e-3;
  } else if (f.decay == DecayClass::compact) {
    short_cut = reach < f.scale * (1.0 - 1e-12);
  }
  if (short_cut) {
    std::ostringstream s;
    s << "radius " << R << " truncates " << f.name << "; use at least " << natural;
    throw TruncationError(s.str(), natural);
  }
  return R;
}

SpectralFunction forward_transform(const HyperFunction &f, const QuadratureSpec &quad) {
  const double radius = truncation_radius(f, quad);
  SpectralFunction phi;
  phi.sphere = quad.sphere();
  phi.rho = quad.rho_grid();
  phi.source = f.name;
  phi.real_source = f.real;
  phi.values.assign(phi.directions() * phi.rho.size(), {0.0, 0.0});
  std::vector<cplx> row(phi.rho.size());
  for (std::size_t j = 0; j < phi.directions(); ++j) {
    std::fill(row.begin(), row.end(), cplx{0.0, 0.0});
    accumulate(forward_terms(f, phi.sphere.nodes[j], radius, quad), phi.rho, 1.0, row);
    std::copy(row.begin(), row.end(), phi.values.begin() + j * phi.rho.size());
  }
  return phi;
}

cplx forward_at(const HyperFunction &f, const ConeVector &k, cplx rho,
                const QuadratureSpec &quad) {
  const double radius = truncation_radius(f, quad);
  const Vec3 &d = k.direction();
  const Vec3 n = k.sigma() == -1 ? d : Vec3{-d[0], -d[1], -d[2]};
  const PhaseSum terms = forward_terms(f, n, radius, quad);
  // (omega q)^{-1+i rho} = omega^{-1+i rho} q^{-1+i rho}
  const cplx scale = std::exp((cplx(-1.0, 0.0) + cplx(0.0, 1.0) * rho) * std::log(k.omega()));
  cplx sum{0.0, 0.0};
  for (std::size_t i = 0; i < terms.coef.size(); ++i)
    sum += terms.coef[i] * std::exp(cplx(0.0, 1.0) * rho * terms.phase[i]);
  sum *= scale;
  return sum;
}

cplx gelfand_graev(const HyperFunction &f, const ConeVector &k, const QuadratureSpec &quad,
                   Diagnostics *diag) {
  if (k.sigma() != -1)
    throw DomainError("horosphere integral needs a past-cone vector (sigma = -1)");
  const double radius = truncation_radius(f, quad);
  const double omega = k.omega();
  const double u_max = std::asinh(radius);
  const double u_min = std::abs(std::log(omega));
  if (u_min >= u_max) {
    if (diag)
      diag->warnings.push_back("horosphere misses the support for omega = " +
                               format_double(omega));
    return {0.0, 0.0};
  }
  const Frame fr = frame_for(k.direction());
  const Rule1D u_rule = gauss_legendre(quad.polar_nodes, u_min, u_max);
  const Azimuth az(quad.azimuth_nodes);
  cplx sum{0.0, 0.0};
  for (std::size_t i = 0; i < u_rule.nodes.size(); ++i) {
    const double u = u_rule.nodes[i];
    const double r = std::sinh(u);
    const double c = (1.0 / omega - std::cosh(u)) / r;
    sum += u_rule.weights[i] * r * azimuthal_sum(f, fr, r, c, az.c, az.s);
  }
  return sum / omega;
}

ConeFunction gelfand_graev_function(const HyperFunction &f, const QuadratureSpec &quad) {
  const double radius = truncation_radius(f, quad);
  QuadratureSpec q = quad;
  q.radius = radius;
  return {[f, q](double omega, const Vec3 &n) {
            return gelfand_graev(f, ConeVector(omega, n, -1), q);
          },
          std::asinh(radius)};
}

std::vector<cplx> mellin_spectrum(const ConeFunction &h, const Vec3 &n,
                                  const std::vector<double> &rho,
                                  const QuadratureSpec &quad) {
  quad.validate();
  // g(s) = e^s h(e^s k0); the transform is int ds g(s) e^{-i rho s}.
  double edge = 0.0, peak = 0.0;
  auto sample = [&](double window) {
    const int steps = std::max(2, static_cast<int>(std::ceil(2.0 * window / quad.mellin_step)));
    const double step = 2.0 * window / steps;
    PhaseSum terms;
    edge = peak = 0.0;
    for (int i = 0; i <= steps; ++i) {
      const double s = -window + step * i;
      const cplx g = std::exp(s) * h(std::exp(s), n);
      peak = std::max(peak, std::abs(g));
      if (i == 0 || i == steps)
        edge = std::max(edge, std::abs(g));
      terms.coef.push_back((i == 0 || i == steps ? 0.5 * step : step) * g);
      terms.phase.push_back(s);
    }
    return terms;
  };
  PhaseSum terms;
  if (h.log_support) {
    terms = sample(*h.log_support);
  } else {
    for (double window = 8.0;; window += 8.0) {
      terms = sample(window);
      if (edge <= 1e-14 * peak)
        break;
      if (window >= 64.0)
        throw QuadratureError("Mellin integral: ray integrand does not decay");
    }
  }
  for (const cplx &c : terms.coef)
    if (!std::isfinite(std::abs(c)))
      throw QuadratureError("Mellin integral: non-finite ray sample");
  std::vector<cplx> out(rho.size(), {0.0, 0.0});
  accumulate(terms, rho, -1.0, out);
  return out;
}

cplx mellin(const ConeFunction &h, const Vec3 &n, double rho, const QuadratureSpec &quad) {
  return mellin_spectrum(h, n, {rho}, quad).front();
}

cplx mellin_inverse(const std::vector<double> &rho, const std::vector<cplx> &values,
                    double t) {
  if (rho.size() != values.size())
    throw DomainError("Mellin inversion: grid and values differ in length");
  const auto w = trapezoid_weights(rho);
  cplx sum{0.0, 0.0};
  for (std::size_t m = 0; m < rho.size(); ++m)
    sum += w[m] * values[m] * std::polar(1.0, rho[m] * std::log(t));
  return sum / (2.0 * pi * t);
}

namespace {

// Precomputed synthesis weights w_j w_m rho_m^2 phi(j, m) / (16 pi^3).
struct Synthesis {
  const SpectralFunction &phi;
  std::vector<cplx> a;
  bool fast;

  explicit Synthesis(const SpectralFunction &p) : phi(p), fast(uniform_symmetric(p.rho)) {
    const auto w = p.rho_weights();
    a.resize(p.values.size());
    for (std::size_t j = 0; j < p.directions(); ++j)
      for (std::size_t m = 0; m < p.rho.size(); ++m)
        a[j * p.rho.size() + m] = kInverseConstant * p.sphere.weights[j] * w[m] *
                                  p.rho[m] * p.rho[m] * p.at(j, m);
  }

  cplx operator()(const HyperPoint &x) const {
    const std::size_t nm = phi.rho.size();
    const bool conj_shortcut = fast && phi.real_source;
    cplx total{0.0, 0.0};
    for (std::size_t j = 0; j < phi.directions(); ++j) {
      const double q = x.x4() + dot3(x.spatial(), phi.sphere.nodes[j]);
      const double lq = std::log(q);
      const cplx *row = a.data() + j * nm;
      cplx s{0.0, 0.0};
      if (fast) {
        const std::size_t first = nm / 2;
        const double h = (phi.rho.back() - phi.rho.front()) / static_cast<double>(nm - 1);
        cplx z = std::polar(1.0, -phi.rho[first] * lq);
        const cplx dz = std::polar(1.0, -h * lq);
        for (std::size_t m = first; m < nm; ++m) {
          const std::size_t mirror = nm - 1 - m;
          const cplx up = row[m] * z;
          if (mirror == m) {
            s += up;
          } else if (conj_shortcut) {
            s += 2.0 * up.real();
          } else {
            s += up + row[mirror] * std::conj(z);
          }
          z *= dz;
        }
      } else {
        for (std::size_t m = 0; m < nm; ++m)
          s += row[m] * std::polar(1.0, -phi.rho[m] * lq);
      }
      total += s / q;
    }
    return conj_shortcut ? cplx(total.real(), 0.0) : total;
  }
};

} // namespace

cplx inverse_transform(const SpectralFunction &phi, const HyperPoint &x) {
  return Synthesis(phi)(x);
}

std::vector<cplx> inverse_transform(const SpectralFunction &phi,
                                    const std::vector<HyperPoint> &xs) {
  const Synthesis syn(phi);
  std::vector<cplx> out;
  out.reserve(xs.size());
  for (const auto &x : xs)
    out.push_back(syn(x));
  return out;
}

std::vector<VolumeNode> evaluation_grid(double radius, const QuadratureSpec &quad) {
  auto nodes = ball_rule(quad.eval_radial, sphere_product_rule(quad.eval_theta, quad.eval_phi),
                         radius);
  for (auto &n : nodes)
    n.weight *= measure_weight_H3(lift(n.x));
  return nodes;
}

RoundTrip round_trip(const HyperFunction &f, const QuadratureSpec &quad) {
  return round_trip(f, forward_transform(f, quad), quad);
}

RoundTrip round_trip(const HyperFunction &f, const SpectralFunction &phi,
                     const QuadratureSpec &quad) {
  const double radius = truncation_radius(f, quad);
  const auto grid = evaluation_grid(radius, quad);
  std::vector<HyperPoint> xs;
  xs.reserve(grid.size());
  for (const auto &n : grid)
    xs.push_back(lift(n.x));
  const auto rec = inverse_transform(phi, xs);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const cplx v = f(grid[i].x);
    num += grid[i].weight * std::norm(rec[i] - v);
    den += grid[i].weight * std::norm(v);
  }
  RoundTrip r;
  r.relative_error = den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
  r.tail_mass = phi.tail_mass();
  tail_warning(r.tail_mass, quad, r.diagnostics);
  return r;
}

Plancherel plancherel_check(const HyperFunction &f, const QuadratureSpec &quad) {
  return plancherel_check(f, forward_transform(f, quad), quad);
}

Plancherel plancherel_check(const HyperFunction &f, const SpectralFunction &phi,
                            const QuadratureSpec &quad) {
  const double radius = truncation_radius(f, quad);
  Plancherel p;
  for (const auto &node : ball_rule(quad.radial_nodes, quad.sphere(), radius))
    p.lhs += node.weight * measure_weight_H3(lift(node.x)) * std::norm(f(node.x));
  const auto w = phi.rho_weights();
  for (std::size_t m = 0; m < phi.rho_count(); ++m) {
    double s = 0.0;
    for (std::size_t j = 0; j < phi.directions(); ++j)
      s += phi.sphere.weights[j] * std::norm(phi.at(j, m));
    p.rhs += w[m] * phi.rho[m] * phi.rho[m] * s;
  }
  p.rhs *= kInverseConstant;
  p.ratio = p.rhs > 0.0 ? p.lhs / p.rhs : 0.0;
  tail_warning(phi.tail_mass(), quad, p.diagnostics);
  return p;
}

RefinementStudy rho_refinement_study(const HyperFunction &f, const QuadratureSpec &quad,
                                     int coarse_count) {
  if (coarse_count < 3 || coarse_count % 2 == 0)
    throw ConfigError("refinement study needs an odd coarse count >= 3");
  QuadratureSpec fine = quad;
  fine.rho_count = 2 * (coarse_count - 1) + 1;
  const SpectralFunction phi_fine = forward_transform(f, fine);
  SpectralFunction phi_coarse = phi_fine;
  phi_coarse.rho.clear();
  phi_coarse.values.clear();
  for (std::size_t m = 0; m < phi_fine.rho.size(); m += 2)
    phi_coarse.rho.push_back(phi_fine.rho[m]);
  for (std::size_t j = 0; j < phi_fine.directions(); ++j)
    for (std::size_t m = 0; m < phi_fine.rho.size(); m += 2)
      phi_coarse.values.push_back(phi_fine.at(j, m));
  RefinementStudy r;
  r.coarse_spacing = phi_coarse.rho[1] - phi_coarse.rho[0];
  r.coarse_error = round_trip(f, phi_coarse, quad).relative_error;
  r.fine_error = round_trip(f, phi_fine, quad).relative_error;
  r.observed_order = std::log2(r.coarse_error / r.fine_error);
  return r;
}

SpectralFunction cone_spectrum(const ConeFunction &h, const QuadratureSpec &quad) {
  SpectralFunction phi;
  phi.sphere = quad.sphere();
  phi.rho = quad.rho_grid();
  phi.source = "cone";
  phi.values.reserve(phi.directions() * phi.rho.size());
  for (std::size_t j = 0; j < phi.directions(); ++j) {
    const auto row = mellin_spectrum(h, phi.sphere.nodes[j], phi.rho, quad);
    phi.values.insert(phi.values.end(), row.begin(), row.end());
  }
  return phi;
}

cplx double_inverse_gg(const ConeFunction &h, const HyperPoint &x, const QuadratureSpec &quad) {
  return inverse_transform(cone_spectrum(h, quad), x);
}

std::vector<cplx> double_inverse_gg(const ConeFunction &h, const std::vector<HyperPoint> &xs,
                                    const QuadratureSpec &quad) {
  return inverse_transform(cone_spectrum(h, quad), xs);
}

} // namespace sga::transform
