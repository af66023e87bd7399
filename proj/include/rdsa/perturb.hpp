#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Core>

namespace rdsa {

using Rng = std::mt19937_64;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using MatrixI64 = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

/// 3^n with an overflow guard.
std::int64_t pow3(int n);

// ---------------------------------------------------------------------------
// Semi-lexicographic sequence: 3^N rows with entries in {-1, 2}, generated on
// demand from the base-3 digits of the row index (digit 0 or 1 -> -1,
// digit 2 -> 2).  Over one full cycle the Gram matrix is 2*3^N * I.

struct LexSequence {
  int dim;
  std::int64_t cycle_len;  // 3^dim

  explicit LexSequence(int n);
};

/// Row m of the semi-lexicographic sequence as exact integers.
std::vector<int> lex_row_int(int n, std::int64_t m);

/// Row m as a real perturbation vector.
Vector lex_row(int n, std::int64_t m);

/// Full-cycle Gram matrix sum_m d_m d_m^T in exact integer arithmetic.
/// Equals 2*3^N * I.
MatrixI64 lex_gram(int n);

// ---------------------------------------------------------------------------
// Permutation-matrix sequence: cycles through the rows e_{sigma(m)} of a
// permutation of the identity.  Cycle Gram matrix is exactly I.

struct PermSequence {
  int dim;
  std::vector<int> order;  // 0-based permutation of {0..dim-1}

  static PermSequence identity(int n);
  static PermSequence cyclic(int n, int shift = 1);
  PermSequence(int n, std::vector<int> sigma);
};

Vector perm_row(const PermSequence& seq, std::int64_t m);

// ---------------------------------------------------------------------------
// Random direction sources used by the baseline algorithms.

struct RandomDirectionDist {
  enum class Kind { asym_bernoulli, uniform, rademacher };

  Kind kind;
  double param;  // epsilon for asym Bernoulli, eta for uniform, unused otherwise

  static RandomDirectionDist asym_bernoulli(double epsilon);
  static RandomDirectionDist uniform(double eta);
  static RandomDirectionDist rademacher();

  double second_moment() const;
  double fourth_moment() const;
};

Vector sample_direction(const RandomDirectionDist& dist, int n, Rng& rng);

}  // namespace rdsa
