#include "evd/params.hpp"

#include "evd/error.hpp"

namespace evd {

std::int64_t size_cap(std::int64_t n, const Rational& lambda) {
  return floor(lambda * n).convert_to<std::int64_t>();
}

ProblemParams::ProblemParams(std::int64_t n, std::int64_t k, std::int64_t m, Rational lambda)
    : n_(n), k_(k), m_(m), lambda_(std::move(lambda)), cap_(0) {
  if (n_ < 1) throw Error(ErrorKind::InvalidArgument, "n must be >= 1");
  if (k_ < 1) throw Error(ErrorKind::InvalidArgument, "k must be >= 1");
  if (m_ < 1) throw Error(ErrorKind::InvalidArgument, "m must be >= 1");
  if (lambda_ <= 0 || lambda_ > 1) throw Error(ErrorKind::InvalidArgument, "lambda must lie in (0, 1]");
  cap_ = evd::size_cap(n_, lambda_);
}

std::string ProblemParams::describe() const {
  return "n=" + std::to_string(n_) + " k=" + std::to_string(k_) + " m=" + std::to_string(m_) +
         " lambda=" + to_string(lambda_);
}

}  // namespace evd
