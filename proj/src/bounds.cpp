#include "evd/bounds.hpp"

#include "evd/error.hpp"
#include "evd/family.hpp"

#include <boost/math/constants/constants.hpp>

#include <sstream>

namespace evd::bounds {

namespace mp = boost::multiprecision;

namespace {

const Real& pi() {
  static const Real value = boost::math::constants::pi<Real>();
  return value;
}

const Rational kHalf(1, 2);

Real root(const Real& x, std::int64_t degree) { return mp::pow(x, Real(1) / Real(degree)); }

Real real_of(std::int64_t v) { return Real(v); }

BoundReport make_report(std::string name, std::int64_t n, std::int64_t k, std::int64_t m, Rational lambda, Side side,
                        bool asymptotic) {
  BoundReport r;
  r.name = std::move(name);
  r.n = n;
  r.k = k;
  r.m = m;
  r.lambda = std::move(lambda);
  r.side = side;
  r.asymptotic = asymptotic;
  return r;
}

void set_exact(BoundReport& r, Rational q) {
  r.value = to_real(q);
  r.exact = std::move(q);
}

/// lambda^{2m-1} + lambda^{2m}
Rational lambda_pair(const Rational& lambda, std::int64_t m) {
  return rational_pow(lambda, static_cast<std::uint64_t>(2 * m - 1)) + rational_pow(lambda, static_cast<std::uint64_t>(2 * m));
}

}  // namespace

std::string_view to_string(Side side) noexcept { return side == Side::Lower ? "lower" : "upper"; }

Real binary_entropy(const Rational& lambda) {
  if (lambda < 0 || lambda > 1) throw Error(ErrorKind::DomainError, "binary entropy needs 0 <= lambda <= 1");
  if (lambda == 0 || lambda == 1) return Real(0);
  const Real l = to_real(lambda);
  const Real r = to_real(Rational(1 - lambda));
  return -(l * log2(l)) - r * log2(r);
}

std::int64_t tau_from_entropy(const Real& h) {
  if (h <= 0) throw Error(ErrorKind::DomainError, "tau needs positive entropy");
  Real x = Real(1) / (mp::pow(Real(4), h) - 1);
  const Real nearest = mp::round(x);
  if (mp::abs(x - nearest) < Real("1e-80")) x = nearest;
  return mp::ceil(x).convert_to<std::int64_t>();
}

Real overshoot_cost(const Real& h, std::int64_t t) {
  if (t < 1) throw Error(ErrorKind::DomainError, "overshoot must be positive");
  return mp::pow(Real(4), h * t) / t;
}

Real gamma_half_plus_one(std::int64_t k) {
  if (k < 1) throw Error(ErrorKind::DomainError, "dimension must be positive");
  if (k % 2 == 0) return to_real(factorial(k / 2));
  const std::int64_t j = (k + 1) / 2;
  const Rational coeff(factorial(2 * j), pow2(static_cast<std::uint64_t>(2 * j)) * factorial(j));
  return to_real(coeff) * mp::sqrt(pi());
}

BoundReport pigeonhole_lower(const ProblemParams& p) {
  const Integer count = family_size(p.n(), p.lambda(), p.m());
  if (count <= 0) throw Error(ErrorKind::DegenerateFamily, "no family member has size >= m for " + p.describe());
  auto r = make_report("pigeonhole_lower", p.n(), p.k(), p.m(), p.lambda(), Side::Lower, true);
  const Rational scale = p.lambda() * p.n();
  if (p.k() == 1 && p.m() == 1) {
    set_exact(r, Rational(count) / scale);
    return r;
  }
  const Real inner = to_real(factorial(p.m())) * root(to_real(count), p.k());
  r.value = root(inner, p.m()) / to_real(scale);
  return r;
}

BoundReport variance_lower_small(std::int64_t n, std::int64_t m) {
  if (m < 1 || n < m) throw Error(ErrorKind::InvalidArgument, "variance_lower_small needs n >= m >= 1");
  auto r = make_report("variance_lower_small", n, 1, m, Rational(1), Side::Lower, true);
  const Real c_m = mp::pow(Real(2), Real(1) - Real(1) / real_of(m)) * root(to_real(factorial(m - 1)), m) /
                   mp::pow(Real(3), Real(1) / real_of(2 * m));
  r.value = c_m * mp::pow(Real(2), real_of(n) / real_of(m)) / mp::pow(real_of(n), Real(1) - Real(1) / real_of(2 * m));
  return r;
}

Real variance_lower_general_constant(const ProblemParams& p) {
  const std::int64_t m = p.m();
  const std::int64_t k = p.k();
  const Real gamma_term = mp::pow(gamma_half_plus_one(k), Real(2) / real_of(k));
  const Real ball = pi() * real_of(k + 2);
  const Rational pair = lambda_pair(p.lambda(), m);
  const Integer fm1 = factorial(m - 1);
  if (p.lambda() < kHalf) {
    return to_real(Integer(fm1 * fm1)) * gamma_term / (to_real(Rational(2 * pair)) * ball);
  }
  if (p.lambda() == kHalf) {
    const Integer four_m = pow2(static_cast<std::uint64_t>(2 * m));
    const Rational denom = Rational(2 * four_m) * pair + 1;
    return to_real(Integer(four_m * fm1 * fm1)) * gamma_term / (to_real(denom) * ball);
  }
  const Integer fm = factorial(m);
  const Rational denom = Rational(2 * m * m) * pair + 1;
  return to_real(Integer(fm * fm)) * gamma_term / (to_real(denom) * ball);
}

BoundReport variance_lower_general(const ProblemParams& p) {
  auto r = make_report("variance_lower_general", p.n(), p.k(), p.m(), p.lambda(), Side::Lower, true);
  const Real constant = variance_lower_general_constant(p);
  const Integer family = family_size(p.n(), p.lambda(), 0);
  const Real mk = real_of(p.m() * p.k());
  r.value = root(constant, 2 * p.m()) * mp::pow(to_real(family), Real(1) / mk) /
            mp::pow(real_of(p.n()), real_of(2 * p.m() - 1) / real_of(2 * p.m()));
  return r;
}

BoundReport variance_upper_sequence(const ProblemParams& p, const Integer& bound_m) {
  if (bound_m < 1) throw Error(ErrorKind::InvalidArgument, "variance_upper_sequence needs M >= 1");
  const std::int64_t m = p.m();
  auto r = make_report("variance_upper_sequence", p.n(), p.k(), m, p.lambda(), Side::Upper, true);
  r.bound_m = bound_m;
  const Rational pair = lambda_pair(p.lambda(), m);
  const Integer scale = mp::pow(Integer(p.n()), static_cast<unsigned>(2 * m - 1)) *
                        mp::pow(bound_m, static_cast<unsigned>(2 * m)) * p.k();
  const Integer fm1 = factorial(m - 1);
  Rational value;
  if (p.lambda() < kHalf) {
    value = Rational(2) * pair * scale / Rational(fm1 * fm1);
  } else if (p.lambda() == kHalf) {
    const Integer four_m = pow2(static_cast<std::uint64_t>(2 * m));
    value = (Rational(2 * four_m) * pair + 1) * scale / Rational(four_m * fm1 * fm1);
  } else {
    const Integer fm = factorial(m);
    value = (Rational(2 * m * m) * pair + 1) * scale / Rational(fm * fm);
  }
  set_exact(r, std::move(value));
  return r;
}

BoundReport allones_variance_bound(std::int64_t n, std::int64_t m, const Rational& lambda) {
  if (n < 1 || m < 1) throw Error(ErrorKind::InvalidArgument, "allones_variance_bound needs n, m >= 1");
  auto r = make_report("allones_variance_bound", n, 1, m, lambda, Side::Upper, true);
  const Integer fm1 = factorial(m - 1);
  if (lambda < kHalf) {
    const Rational ln = lambda * n;
    r.value = mp::sqrt(real_of(n)) * to_real(rational_pow(ln, static_cast<std::uint64_t>(2 * m - 2))) / to_real(Integer(fm1 * fm1));
  } else if (lambda == kHalf) {
    set_exact(r, Rational(mp::pow(Integer(n), static_cast<unsigned>(2 * m - 1)),
                          pow2(static_cast<std::uint64_t>(2 * m)) * fm1 * fm1));
  } else {
    const Integer fm = factorial(m);
    set_exact(r, Rational(mp::pow(Integer(n), static_cast<unsigned>(2 * m - 1)), fm * fm));
  }
  return r;
}

Real ball_packing_second_moment(std::int64_t k, const Integer& count) {
  const Real gamma_term = mp::pow(gamma_half_plus_one(k), Real(2) / real_of(k));
  return real_of(k) * gamma_term / (pi() * real_of(k + 2)) *
         mp::pow(to_real(count), Real(2) / real_of(k) + Real(1));
}

Real prob_upper_constant(const Rational& lambda, std::int64_t k) {
  const Real h = binary_entropy(lambda);
  const std::int64_t tau = tau_from_entropy(h);
  return root(overshoot_cost(h, tau), k);
}

BoundReport prob_upper(const ProblemParams& p) {
  if (p.lambda() >= kHalf)
    throw Error(ErrorKind::HypothesisViolated, "prob_upper needs lambda < 1/2; use prob_upper_full");
  auto r = make_report("prob_upper", p.n(), p.k(), p.m(), p.lambda(), Side::Upper, false);
  const Real h = binary_entropy(p.lambda());
  r.tau = tau_from_entropy(h);
  r.value = prob_upper_constant(p.lambda(), p.k()) * real_of(p.m()) *
            mp::pow(Real(4), h * real_of(p.n()) / real_of(p.k()));
  return r;
}

BoundReport prob_upper_full(std::int64_t n, std::int64_t m, std::int64_t k) {
  if (n < 0 || m < 1 || k < 1) throw Error(ErrorKind::InvalidArgument, "prob_upper_full needs n >= 0, m, k >= 1");
  auto r = make_report("prob_upper_full", n, k, m, Rational(1), Side::Upper, false);
  if ((2 * n) % k == 0) {
    set_exact(r, Rational(Integer(m) * pow2(static_cast<std::uint64_t>(2 * n / k))));
  } else {
    r.value = real_of(m) * mp::pow(Real(4), real_of(n) / real_of(k));
  }
  return r;
}

std::vector<ConstantsRow> constants_table(std::int64_t m_max) {
  if (m_max < 1) throw Error(ErrorKind::InvalidArgument, "constants_table needs mMax >= 1");
  std::vector<ConstantsRow> rows;
  for (std::int64_t m = 1; m <= m_max; ++m) {
    ConstantsRow row;
    row.m = m;
    row.c_m = mp::pow(Real(2), Real(1) - Real(1) / real_of(m)) * root(to_real(factorial(m - 1)), m) /
              mp::pow(Real(3), Real(1) / real_of(2 * m));
    row.c_1m1 = root(to_real(factorial(m)), m) / root(real_of(3 * (4 * m * m + 1)), 2 * m);
    row.c_1m1_from_theorem = root(variance_lower_general_constant(ProblemParams(1, 1, m, Rational(1))), 2 * m);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<BoundReport> standard_reports(const ProblemParams& p, const std::optional<Integer>& bound_m) {
  std::vector<BoundReport> out;
  if (!p.degenerate()) out.push_back(pigeonhole_lower(p));
  if (p.k() == 1 && p.lambda() == 1 && p.n() >= p.m()) out.push_back(variance_lower_small(p.n(), p.m()));
  out.push_back(variance_lower_general(p));
  if (p.lambda() < kHalf) out.push_back(prob_upper(p));
  auto full = prob_upper_full(p.n(), p.m(), p.k());
  full.lambda = p.lambda();
  out.push_back(std::move(full));
  auto allones = allones_variance_bound(p.n(), p.m(), p.lambda());
  out.push_back(std::move(allones));
  if (bound_m) out.push_back(variance_upper_sequence(p, *bound_m));
  return out;
}

std::string to_csv(const std::vector<BoundReport>& reports, bool header) {
  std::ostringstream os;
  if (header) os << "name,n,k,m,lambda,side,asymptotic,value,value_log2\n";
  for (const auto& r : reports) {
    os << r.name << ',' << r.n << ',' << r.k << ',' << r.m << ',' << evd::to_string(r.lambda) << ','
       << to_string(r.side) << ',' << (r.asymptotic ? "true" : "false") << ','
       << evd::to_string(r.value, 50) << ','
       << evd::to_string(r.log2_value(), 30) << '\n';
  }
  return os.str();
}

}  // namespace evd::bounds
