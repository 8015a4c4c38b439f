#include "plogit/exact_linalg.hpp"

#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

namespace plogit::linalg {
namespace {

using IntRow = std::vector<BigInt>;

struct Echelon {
  std::vector<IntRow> rows;          // rows[k] for k < pivots.size() are pivot rows
  std::vector<std::size_t> pivots;   // pivot column of each pivot row
  int sign = 1;                      // parity of the row swaps
  std::vector<BigInt> row_scale;     // integer row r = row_scale[r] * rational row r
};

// Columns are read in `order`; entry j of each IntRow corresponds to
// original column order[j].
Echelon integer_rows(const RationalMatrix& m, const std::vector<std::size_t>& order) {
  Echelon e;
  e.rows.resize(m.rows());
  e.row_scale.resize(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    BigInt lcm = 1;
    for (const auto& q : m.row(i)) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), q.get_den_mpz_t());
    IntRow& r = e.rows[i];
    r.resize(order.size());
    for (std::size_t j = 0; j < order.size(); ++j) {
      const Rational& q = m(i, order[j]);
      r[j] = q.get_num() * (lcm / q.get_den());
    }
    e.row_scale[i] = lcm;
  }
  return e;
}

// Fraction-free forward elimination. Every division by the previous pivot
// is exact (entries are minors of the scaled input).
void bareiss(Echelon& e, std::size_t cols) {
  auto& a = e.rows;
  const std::size_t nrows = a.size();
  BigInt prev = 1;
  BigInt t1, t2;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < nrows; ++c) {
    std::size_t p = r;
    while (p < nrows && a[p][c] == 0) ++p;
    if (p == nrows) continue;
    if (p != r) {
      std::swap(a[p], a[r]);
      std::swap(e.row_scale[p], e.row_scale[r]);
      e.sign = -e.sign;
    }
    const BigInt& piv = a[r][c];
    for (std::size_t i = r + 1; i < nrows; ++i) {
      const BigInt lead = a[i][c];
      if (lead == 0) {
        // (piv * x - 0) / prev
        for (std::size_t j = c + 1; j < cols; ++j) {
          if (a[i][j] == 0) continue;
          t1 = piv * a[i][j];
          mpz_divexact(a[i][j].get_mpz_t(), t1.get_mpz_t(), prev.get_mpz_t());
        }
      } else {
        for (std::size_t j = c + 1; j < cols; ++j) {
          t1 = piv * a[i][j];
          t2 = lead * a[r][j];
          t1 -= t2;
          mpz_divexact(a[i][j].get_mpz_t(), t1.get_mpz_t(), prev.get_mpz_t());
        }
        a[i][c] = 0;
      }
    }
    prev = piv;
    e.pivots.push_back(c);
    ++r;
  }
}

Echelon eliminate(const RationalMatrix& m, const std::vector<std::size_t>& order) {
  Echelon e = integer_rows(m, order);
  bareiss(e, order.size());
  return e;
}

std::vector<std::size_t> natural_order(std::size_t n) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  return order;
}

// Reduced row echelon rows (pivot entries 1) from a forward echelon, in the
// permuted column coordinates.
std::vector<std::vector<Rational>> reduce(const Echelon& e, std::size_t cols) {
  const std::size_t r = e.pivots.size();
  std::vector<std::vector<Rational>> R(r, std::vector<Rational>(cols));
  for (std::size_t k = 0; k < r; ++k) {
    const BigInt& piv = e.rows[k][e.pivots[k]];
    for (std::size_t j = e.pivots[k]; j < cols; ++j) {
      if (e.rows[k][j] != 0) R[k][j] = make_rational(e.rows[k][j], piv);
    }
  }
  for (std::size_t k = r; k-- > 0;) {
    const std::size_t pc = e.pivots[k];
    for (std::size_t i = 0; i < k; ++i) {
      if (R[i][pc] == 0) continue;
      const Rational f = R[i][pc];
      for (std::size_t j = pc; j < cols; ++j) {
        if (R[k][j] != 0) R[i][j] -= f * R[k][j];
      }
    }
  }
  return R;
}

}  // namespace

std::size_t rank(const RationalMatrix& m) {
  if (m.empty()) return 0;
  return eliminate(m, natural_order(m.cols())).pivots.size();
}

RationalMatrix nullspace(const RationalMatrix& m) {
  const std::size_t n = m.cols();
  if (m.rows() == 0) return RationalMatrix::identity(n);
  // Eliminating right-to-left makes each free column's basis vector vanish
  // above its own index, which is exactly the canonical column echelon form.
  std::vector<std::size_t> order(n);
  for (std::size_t j = 0; j < n; ++j) order[j] = n - 1 - j;
  const Echelon e = eliminate(m, order);
  const auto R = reduce(e, n);

  std::vector<bool> is_pivot(n, false);
  for (auto pc : e.pivots) is_pivot[pc] = true;

  const std::size_t d = n - e.pivots.size();
  RationalMatrix basis(n, d);
  std::size_t col = 0;
  // Descending permuted index = ascending original index of the pivot row.
  for (std::size_t f = n; f-- > 0;) {
    if (is_pivot[f]) continue;
    basis(order[f], col) = 1;
    for (std::size_t k = 0; k < R.size(); ++k) {
      if (R[k][f] != 0) basis(order[e.pivots[k]], col) = -R[k][f];
    }
    ++col;
  }
  return basis;
}

RationalMatrix rref_canonicalize(const RationalMatrix& b) {
  if (b.cols() == 0) return RationalMatrix(b.rows(), 0);
  const RationalMatrix bt = b.transpose();
  const Echelon e = eliminate(bt, natural_order(bt.cols()));
  const auto R = reduce(e, bt.cols());
  RationalMatrix out(b.rows(), R.size());
  for (std::size_t k = 0; k < R.size(); ++k)
    for (std::size_t i = 0; i < b.rows(); ++i) out(i, k) = R[k][i];
  return out;
}

Rational det(const RationalMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("det: matrix is not square");
  const std::size_t n = m.rows();
  if (n == 0) return Rational(1);
  const Echelon e = eliminate(m, natural_order(n));
  if (e.pivots.size() < n) return Rational(0);
  BigInt scale = 1;
  for (const auto& s : e.row_scale) scale *= s;
  Rational d = make_rational(e.rows[n - 1][n - 1], scale);
  return e.sign < 0 ? Rational(-d) : d;
}

}  // namespace plogit::linalg
