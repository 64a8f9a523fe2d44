#include "ado3d/special_functions.hpp"

#include "ado3d/errors.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>

namespace ado3d {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kRatioSingular = 1e-14;

void check_order(int l, int m, const char* where) {
  if (l < 0 || std::abs(m) > l) {
    std::ostringstream msg;
    msg << where << ": require |m| <= l, got l=" << l << " m=" << m;
    throw std::invalid_argument(msg.str());
  }
}

double sign_power(int k) { return (k % 2 == 0) ? 1.0 : -1.0; }

// sqrt((2j)! / (a! b!))
double binomial_root(int j, int a, int b) {
  return std::exp(0.5 * (std::lgamma(2.0 * j + 1.0) - std::lgamma(a + 1.0) -
                         std::lgamma(b + 1.0)));
}

}  // namespace

void PhaseFunction::validate() const {
  if (!(anisotropy >= 0.0 && anisotropy <= 1.0)) {
    throw std::invalid_argument("phase function: anisotropy must lie in [0, 1]");
  }
  if (degree < 0) {
    throw std::invalid_argument("phase function: degree must be >= 0");
  }
  if (!(albedo > 0.0 && albedo < 1.0)) {
    throw std::invalid_argument("phase function: albedo must lie in (0, 1)");
  }
}

double PhaseFunction::moment(int l) const {
  if (l < 0 || l > degree) return 0.0;
  return std::pow(anisotropy, l);
}

double PhaseFunction::h(int l) const {
  const double base = 2.0 * l + 1.0;
  if (l <= degree) return base * (1.0 - albedo * std::pow(anisotropy, l));
  return base;
}

double normalized_plm_seed(int m) {
  const int am = std::abs(m);
  double value = 1.0;
  for (int k = 1; k <= am; ++k) {
    value *= std::sqrt((2.0 * k - 1.0) / (2.0 * k));
  }
  return m < 0 ? sign_power(am) * value : value;
}

template <typename T>
std::vector<T> normalized_plm_column(int l_max, int m, T mu) {
  const int am = std::abs(m);
  check_order(l_max, m, "normalized_plm_column");
  std::vector<T> column(static_cast<std::size_t>(l_max - am + 1));
  const double m2 = static_cast<double>(m) * m;
  column[0] = T(normalized_plm_seed(m));
  if (l_max > am) column[1] = T(std::sqrt(2.0 * am + 1.0)) * mu * column[0];
  for (int l = am + 1; l < l_max; ++l) {
    const std::size_t k = static_cast<std::size_t>(l - am);
    const double up = std::sqrt((l + 1.0) * (l + 1.0) - m2);
    const double down = std::sqrt(static_cast<double>(l) * l - m2);
    column[k + 1] = (T(2.0 * l + 1.0) * mu * column[k] - T(down) * column[k - 1]) / T(up);
  }
  return column;
}

template std::vector<double> normalized_plm_column<double>(int, int, double);
template std::vector<std::complex<double>> normalized_plm_column<std::complex<double>>(
    int, int, std::complex<double>);

double normalized_plm(int l, int m, double mu) {
  check_order(l, m, "normalized_plm");
  if (m != 0 && !(std::abs(mu) < 1.0)) {
    throw std::invalid_argument("normalized_plm: |mu| < 1 required for m != 0");
  }
  return normalized_plm_column(l, m, mu).back();
}

double legendre_p(int l, double x) {
  if (l == 0) return 1.0;
  double prev = 1.0;
  double cur = x;
  for (int k = 1; k < l; ++k) {
    const double next = ((2.0 * k + 1.0) * x * cur - k * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

int default_l_cut(int l_max) { return std::max(l_max, 8) + 40; }

namespace {

void check_chandrasekhar(int m, double nu, const PhaseFunction& phase, int l_cut) {
  if (nu == 0.0) throw std::invalid_argument("chandrasekhar_g: nu must be nonzero");
  if (l_cut < phase.degree || l_cut < std::abs(m) + 1) {
    throw std::invalid_argument("chandrasekhar_g: l_cut must be >= max(l_max, |m|+1)");
  }
}

}  // namespace

ChandrasekharTable chandrasekhar_g_forward(int m, double nu, const PhaseFunction& phase,
                                           int l_cut) {
  check_chandrasekhar(m, nu, phase, l_cut);
  const int am = std::abs(m);
  const double m2 = static_cast<double>(m) * m;
  ChandrasekharTable table{m, nu, std::vector<double>(static_cast<std::size_t>(l_cut) + 1, 0.0)};
  auto& g = table.values;
  g[am] = normalized_plm_seed(m);
  g[am + 1] = nu * phase.h(am) * g[am] / std::sqrt(2.0 * am + 1.0);
  for (int l = am + 1; l < l_cut; ++l) {
    const double up = std::sqrt((l + 1.0) * (l + 1.0) - m2);
    const double down = std::sqrt(static_cast<double>(l) * l - m2);
    g[l + 1] = (nu * phase.h(l) * g[l] - down * g[l - 1]) / up;
  }
  return table;
}

ChandrasekharTable chandrasekhar_g_backward(int m, double nu, const PhaseFunction& phase,
                                            int l_cut) {
  check_chandrasekhar(m, nu, phase, l_cut);
  const int am = std::abs(m);
  const double m2 = static_cast<double>(m) * m;
  // ratio[l] = g_{l+1} / g_l
  std::vector<double> ratio(static_cast<std::size_t>(l_cut) + 1, 0.0);
  for (int l = l_cut; l >= am + 1; --l) {
    const double denom = nu * phase.h(l) - std::sqrt((l + 1.0) * (l + 1.0) - m2) * ratio[l];
    if (std::abs(denom) < kRatioSingular) {
      std::ostringstream msg;
      msg << "chandrasekhar_g: vanishing ratio denominator at l=" << l << " nu=" << nu;
      throw NumericalSingularity(msg.str());
    }
    ratio[l - 1] = std::sqrt(static_cast<double>(l) * l - m2) / denom;
  }
  ChandrasekharTable table{m, nu, std::vector<double>(static_cast<std::size_t>(l_cut) + 1, 0.0)};
  auto& g = table.values;
  g[am] = normalized_plm_seed(m);
  for (int l = am; l < l_cut; ++l) g[l + 1] = ratio[l] * g[l];
  return table;
}

ChandrasekharTable chandrasekhar_g(int m, double nu, const PhaseFunction& phase, int l_cut) {
  if (std::abs(nu) <= 1.0) return chandrasekhar_g_forward(m, nu, phase, l_cut);
  return chandrasekhar_g_backward(m, nu, phase, l_cut);
}

ChandrasekharTable chandrasekhar_g(int m, double nu, const PhaseFunction& phase) {
  return chandrasekhar_g(m, nu, phase, default_l_cut(phase.degree));
}

namespace {

using cplx = std::complex<double>;

// d^j_{j, m2} from half-angle products expressed through cos(theta) and
// sin(theta) only: cos^2(t/2) = (1+c)/2, sin^2(t/2) = (1-c)/2,
// cos(t/2) sin(t/2) = s/2.
cplx wigner_top_row(int j, int m2, cplx c, cplx s) {
  const int a = j + m2;  // power of cos(theta/2)
  const int b = j - m2;  // power of sin(theta/2)
  const cplx half_cos2 = 0.5 * (1.0 + c);
  const cplx half_sin2 = 0.5 * (1.0 - c);
  const cplx cs = 0.5 * s;
  cplx product = (a >= b) ? std::pow(cs, b) * std::pow(half_cos2, (a - b) / 2)
                          : std::pow(cs, a) * std::pow(half_sin2, (b - a) / 2);
  return sign_power(b) * binomial_root(j, a, b) * product;
}

cplx wigner_start(int m1, int m2, cplx c, cplx s) {
  if (std::abs(m1) >= std::abs(m2)) {
    const int j = std::abs(m1);
    if (m1 >= 0) return wigner_top_row(j, m2, c, s);
    return sign_power(std::abs(m1 + m2)) * wigner_top_row(j, -m2, c, s);
  }
  return sign_power(std::abs(m1 - m2)) * wigner_start(m2, m1, c, s);
}

}  // namespace

std::vector<std::complex<double>> wigner_d_column(int l_max, int m1, int m2,
                                                  std::complex<double> cos_theta,
                                                  std::complex<double> sin_theta) {
  const int l0 = std::max(std::abs(m1), std::abs(m2));
  if (l_max < l0) {
    throw std::invalid_argument("wigner_d_column: l_max below max(|m1|,|m2|)");
  }
  std::vector<cplx> column(static_cast<std::size_t>(l_max - l0 + 1));
  column[0] = wigner_start(m1, m2, cos_theta, sin_theta);
  if (l_max == l0) return column;

  const double a2 = static_cast<double>(m1) * m1;
  const double b2 = static_cast<double>(m2) * m2;
  const double mm = static_cast<double>(m1) * m2;
  int l = l0;
  std::size_t k = 0;
  if (l0 == 0) {
    column[1] = cos_theta;
    l = 1;
    k = 1;
  }
  cplx prev = (l0 == 0) ? column[0] : cplx(0.0);
  for (; l < l_max; ++l, ++k) {
    const double ld = l;
    const double lead = ld * std::sqrt(((ld + 1) * (ld + 1) - a2) * ((ld + 1) * (ld + 1) - b2));
    const double back = (ld + 1) * std::sqrt((ld * ld - a2) * (ld * ld - b2));
    const cplx next =
        ((2 * ld + 1) * (ld * (ld + 1) * cos_theta - mm) * column[k] - back * prev) / lead;
    prev = column[k];
    column[k + 1] = next;
  }
  return column;
}

std::complex<double> wigner_d_continued(int l, int m1, int m2, double tau) {
  if (l < 0 || std::abs(m1) > l || std::abs(m2) > l) {
    throw std::invalid_argument("wigner_d_continued: require |m1|, |m2| <= l");
  }
  const cplx c(std::sqrt(1.0 + tau * tau), 0.0);
  const cplx s(0.0, tau);
  return wigner_d_column(l, m1, m2, c, s).back();
}

namespace {

double j0_series(double x) {
  const double y = -0.25 * x * x;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    term *= y / (static_cast<double>(k) * k);
    sum += term;
    if (std::abs(term) < 1e-18) break;
  }
  return sum;
}

// J0(x) = (1/pi) int_0^pi cos(x sin t) dt; the periodic trapezoid rule
// converges like J_{2M}(x).
double j0_integral(double x) {
  constexpr int kPoints = 96;
  double sum = 0.5 * (1.0 + 1.0);
  for (int k = 1; k < kPoints; ++k) {
    sum += std::cos(x * std::sin(kPi * k / kPoints));
  }
  return sum / kPoints;
}

double j0_hankel(double x) {
  // P and Q of Hankel's expansion, truncated at the smallest term.
  double p = 1.0;
  double q = 0.0;
  double term = 1.0;
  double last = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= -(odd * odd) / (k * 8.0 * x);
    if (std::abs(term) > last) break;
    last = std::abs(term);
    if (k % 2 == 0) {
      p += ((k / 2) % 2 == 0 ? 1.0 : -1.0) * term;
    } else {
      q += (((k - 1) / 2) % 2 == 0 ? 1.0 : -1.0) * term;
    }
    if (last < 1e-17) break;
  }
  const double chi = x - 0.25 * kPi;
  return std::sqrt(2.0 / (kPi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

}  // namespace

double bessel_j0(double x) {
  if (x < 0.0) throw std::invalid_argument("bessel_j0: x must be >= 0");
  if (x < 8.0) return j0_series(x);
  if (x < 32.0) return j0_integral(x);
  return j0_hankel(x);
}

double bessel_asymptotic_qj0(double q, double rho) {
  const double x = q * rho;
  const double x2 = x * x;
  const double chi = x - 0.25 * kPi;
  return std::sqrt(2.0 * q / (kPi * rho)) *
         ((1.0 - 9.0 / (128.0 * x2)) * std::cos(chi) +
          (1.0 / (8.0 * x) - 75.0 / (1024.0 * x2 * x)) * std::sin(chi));
}

double bessel_remainder_d(double q, double rho) {
  return q * bessel_j0(q * rho) - bessel_asymptotic_qj0(q, rho);
}

}  // namespace ado3d
