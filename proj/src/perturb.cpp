#include "rdsa/perturb.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

namespace rdsa {

std::int64_t pow3(int n) {
  if (n < 0) throw std::domain_error("pow3: negative exponent");
  std::int64_t r = 1;
  for (int i = 0; i < n; ++i) {
    if (r > (INT64_MAX / 3)) throw std::overflow_error("pow3: overflow");
    r *= 3;
  }
  return r;
}

LexSequence::LexSequence(int n) : dim(n), cycle_len(0) {
  if (n < 1) throw std::domain_error("LexSequence: dim must be >= 1");
  cycle_len = pow3(n);
}

std::vector<int> lex_row_int(int n, std::int64_t m) {
  if (n < 1) throw std::domain_error("lex_row: dim must be >= 1");
  const std::int64_t cycle = pow3(n);
  if (m < 0 || m >= cycle) throw std::out_of_range("lex_row: row index out of range");
  std::vector<int> d(static_cast<std::size_t>(n));
  // i-th most significant base-3 digit of m drives coordinate i.
  std::int64_t rest = m;
  std::int64_t place = cycle / 3;
  for (int i = 0; i < n; ++i) {
    const int digit = static_cast<int>(rest / place);
    d[static_cast<std::size_t>(i)] = (digit == 2) ? 2 : -1;
    rest %= place;
    if (i + 1 < n) place /= 3;
  }
  return d;
}

Vector lex_row(int n, std::int64_t m) {
  const std::vector<int> d = lex_row_int(n, m);
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = d[static_cast<std::size_t>(i)];
  return v;
}

MatrixI64 lex_gram(int n) {
  if (n < 1) throw std::domain_error("lex_gram: dim must be >= 1");
  if (n > 12) throw std::overflow_error("lex_gram: full-cycle enumeration capped at N=12");
  const std::int64_t cycle = pow3(n);
  MatrixI64 g = MatrixI64::Zero(n, n);
  for (std::int64_t m = 0; m < cycle; ++m) {
    const std::vector<int> d = lex_row_int(n, m);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const std::int64_t term =
            static_cast<std::int64_t>(d[static_cast<std::size_t>(i)]) * d[static_cast<std::size_t>(j)];
        if (g(i, j) > INT64_MAX - 16) throw std::overflow_error("lex_gram: accumulator overflow");
        g(i, j) += term;
      }
  }
  return g;
}

PermSequence::PermSequence(int n, std::vector<int> sigma) : dim(n), order(std::move(sigma)) {
  if (n < 1) throw std::domain_error("PermSequence: dim must be >= 1");
  if (static_cast<int>(order.size()) != n)
    throw std::domain_error("PermSequence: order size mismatch");
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (int v : order) {
    if (v < 0 || v >= n || seen[static_cast<std::size_t>(v)])
      throw std::domain_error("PermSequence: order is not a permutation");
    seen[static_cast<std::size_t>(v)] = true;
  }
}

PermSequence PermSequence::identity(int n) {
  std::vector<int> sigma(static_cast<std::size_t>(n));
  std::iota(sigma.begin(), sigma.end(), 0);
  return PermSequence(n, std::move(sigma));
}

PermSequence PermSequence::cyclic(int n, int shift) {
  std::vector<int> sigma(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) sigma[static_cast<std::size_t>(i)] = (i + shift) % n;
  return PermSequence(n, std::move(sigma));
}

Vector perm_row(const PermSequence& seq, std::int64_t m) {
  if (m < 0 || m >= seq.dim) throw std::out_of_range("perm_row: row index out of range");
  Vector v = Vector::Zero(seq.dim);
  v[seq.order[static_cast<std::size_t>(m)]] = 1.0;
  return v;
}

RandomDirectionDist RandomDirectionDist::asym_bernoulli(double epsilon) {
  if (epsilon <= 0.0) throw std::domain_error("asym_bernoulli: epsilon must be > 0");
  return {Kind::asym_bernoulli, epsilon};
}

RandomDirectionDist RandomDirectionDist::uniform(double eta) {
  if (eta <= 0.0) throw std::domain_error("uniform: eta must be > 0");
  return {Kind::uniform, eta};
}

RandomDirectionDist RandomDirectionDist::rademacher() { return {Kind::rademacher, 0.0}; }

double RandomDirectionDist::second_moment() const {
  switch (kind) {
    case Kind::asym_bernoulli:
      return 1.0 + param;
    case Kind::uniform:
      return param * param / 3.0;
    case Kind::rademacher:
      return 1.0;
  }
  throw std::logic_error("unreachable");
}

double RandomDirectionDist::fourth_moment() const {
  switch (kind) {
    case Kind::asym_bernoulli: {
      const double e1 = 1.0 + param;
      return e1 * (1.0 + e1 * e1 * e1) / (2.0 + param);
    }
    case Kind::uniform: {
      const double eta2 = param * param;
      return eta2 * eta2 / 5.0;
    }
    case Kind::rademacher:
      return 1.0;
  }
  throw std::logic_error("unreachable");
}

Vector sample_direction(const RandomDirectionDist& dist, int n, Rng& rng) {
  if (n < 1) throw std::domain_error("sample_direction: dim must be >= 1");
  Vector d(n);
  switch (dist.kind) {
    case RandomDirectionDist::Kind::asym_bernoulli: {
      // -1 w.p. (1+eps)/(2+eps), 1+eps w.p. 1/(2+eps); zero mean.
      std::uniform_real_distribution<double> u(0.0, 1.0);
      const double p_minus = (1.0 + dist.param) / (2.0 + dist.param);
      for (int i = 0; i < n; ++i) d[i] = (u(rng) < p_minus) ? -1.0 : 1.0 + dist.param;
      break;
    }
    case RandomDirectionDist::Kind::uniform: {
      std::uniform_real_distribution<double> u(-dist.param, dist.param);
      for (int i = 0; i < n; ++i) d[i] = u(rng);
      break;
    }
    case RandomDirectionDist::Kind::rademacher: {
      std::uniform_int_distribution<int> b(0, 1);
      for (int i = 0; i < n; ++i) d[i] = b(rng) ? 1.0 : -1.0;
      break;
    }
  }
  return d;
}

}  // namespace rdsa
