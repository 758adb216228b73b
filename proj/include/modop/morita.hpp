#ifndef MODOP_MORITA_HPP_
#define MODOP_MORITA_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "modop/error.hpp"
#include "modop/matrix.hpp"
#include "modop/report.hpp"

namespace modop {

// Structure constants indexed [i][j][k]: the k-th coordinate of x_i * y_j.
using Tensor3 = std::vector<std::vector<Vector>>;

inline Tensor3 zero_tensor3(std::size_t a, std::size_t b, std::size_t c) {
  return Tensor3(a, std::vector<Vector>(b, Vector(c)));
}

inline void check_shape(const Tensor3& t, std::size_t a, std::size_t b, std::size_t c,
                        const std::string& what) {
  bool ok = t.size() == a;
  for (const auto& row : t) {
    ok = ok && row.size() == b;
    for (const auto& v : row) ok = ok && v.size() == c;
  }
  if (!ok) {
    throw PreconditionError(what + " must have shape " + std::to_string(a) + "x" +
                            std::to_string(b) + "x" + std::to_string(c));
  }
}

// Bilinear map given by structure constants.
inline Vector bilinear(const Tensor3& t, const Vector& x, const Vector& y, std::size_t out_dim) {
  Vector z(out_dim);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0) continue;
    for (std::size_t j = 0; j < y.size(); ++j) {
      if (y[j] == 0) continue;
      Rational s = x[i] * y[j];
      for (std::size_t k = 0; k < out_dim; ++k)
        if (t[i][j][k] != 0) z[k] += s * t[i][j][k];
    }
  }
  return z;
}

inline Vector unit_vector(std::size_t dim, std::size_t i) {
  Vector v(dim);
  v[i] = 1;
  return v;
}

struct FinAlgebra {
  std::size_t dim = 0;
  Tensor3 mult;
  std::optional<Vector> unit;

  FinAlgebra() = default;
  FinAlgebra(std::size_t d, Tensor3 c, std::optional<Vector> u = std::nullopt)
      : dim(d), mult(std::move(c)), unit(std::move(u)) {
    check_shape(mult, dim, dim, dim, "multiplication");
    if (unit && unit->size() != dim) throw PreconditionError("unit has the wrong length");
  }

  Vector operator()(const Vector& x, const Vector& y) const { return bilinear(mult, x, y, dim); }
  Vector e(std::size_t i) const { return unit_vector(dim, i); }
};

// Left action [a][q][k] of the left algebra, right action [q][b][k].
struct Bimodule {
  std::size_t dim = 0;
  Tensor3 left;
  Tensor3 right;

  Bimodule() = default;
  Bimodule(std::size_t d, Tensor3 l, Tensor3 r) : dim(d), left(std::move(l)), right(std::move(r)) {}

  void check_shapes(const FinAlgebra& a, const FinAlgebra& b, const std::string& name) const {
    check_shape(left, a.dim, dim, dim, name + " left action");
    check_shape(right, dim, b.dim, dim, name + " right action");
  }
  Vector act_left(const Vector& a, const Vector& x) const { return bilinear(left, a, x, dim); }
  Vector act_right(const Vector& x, const Vector& b) const { return bilinear(right, x, b, dim); }
  Vector e(std::size_t i) const { return unit_vector(dim, i); }
};

struct MoritaData {
  FinAlgebra A, B;
  Bimodule Q;  // (A,B)-bimodule
  Bimodule R;  // (B,A)-bimodule
  Tensor3 alpha;  // Q x R -> A
  Tensor3 beta;   // R x Q -> B
  std::size_t M = 0;
  Matrix trA;  // M x dim A
  Matrix trB;  // M x dim B

  void check_shapes() const {
    Q.check_shapes(A, B, "Q");
    R.check_shapes(B, A, "R");
    check_shape(alpha, Q.dim, R.dim, A.dim, "alpha");
    check_shape(beta, R.dim, Q.dim, B.dim, "beta");
    if (trA.rows() != M || trA.cols() != A.dim) throw PreconditionError("trA must be M x dim A");
    if (trB.rows() != M || trB.cols() != B.dim) throw PreconditionError("trB must be M x dim B");
  }
};

namespace detail {

inline std::string basis_name(const std::string& space, std::size_t i) {
  return space + std::to_string(i + 1);
}

}  // namespace detail

// Associativity over all basis triples, and the unit law when a unit is given.
inline Report check_associative(const FinAlgebra& a, const std::string& name) {
  Report r;
  for (std::size_t i = 0; i < a.dim; ++i)
    for (std::size_t j = 0; j < a.dim; ++j)
      for (std::size_t k = 0; k < a.dim; ++k) {
        ++r.checked;
        Vector lhs = a(a(a.e(i), a.e(j)), a.e(k));
        Vector rhs = a(a.e(i), a(a.e(j), a.e(k)));
        if (lhs != rhs) {
          r.fail(name + " associativity",
                 "witness (" + detail::basis_name("e", i) + "," + detail::basis_name("e", j) +
                     "," + detail::basis_name("e", k) + ")");
        }
      }
  if (a.unit) {
    for (std::size_t i = 0; i < a.dim; ++i) {
      ++r.checked;
      if (a(*a.unit, a.e(i)) != a.e(i) || a(a.e(i), *a.unit) != a.e(i)) {
        r.fail(name + " unit", "witness " + detail::basis_name("e", i));
      }
    }
  }
  return r;
}

// Left/right module laws, their commutation, and unitality when units exist.
inline Report check_bimodule(const Bimodule& x, const FinAlgebra& a, const FinAlgebra& b,
                             const std::string& name) {
  Report r;
  for (std::size_t i = 0; i < a.dim; ++i)
    for (std::size_t j = 0; j < a.dim; ++j)
      for (std::size_t q = 0; q < x.dim; ++q) {
        ++r.checked;
        if (x.act_left(a(a.e(i), a.e(j)), x.e(q)) != x.act_left(a.e(i), x.act_left(a.e(j), x.e(q))))
          r.fail(name + " left action", "witness (a" + std::to_string(i + 1) + ",a" +
                                            std::to_string(j + 1) + ",x" + std::to_string(q + 1) + ")");
      }
  for (std::size_t q = 0; q < x.dim; ++q)
    for (std::size_t i = 0; i < b.dim; ++i)
      for (std::size_t j = 0; j < b.dim; ++j) {
        ++r.checked;
        if (x.act_right(x.e(q), b(b.e(i), b.e(j))) != x.act_right(x.act_right(x.e(q), b.e(i)), b.e(j)))
          r.fail(name + " right action", "witness (x" + std::to_string(q + 1) + ",b" +
                                             std::to_string(i + 1) + ",b" + std::to_string(j + 1) + ")");
      }
  for (std::size_t i = 0; i < a.dim; ++i)
    for (std::size_t q = 0; q < x.dim; ++q)
      for (std::size_t j = 0; j < b.dim; ++j) {
        ++r.checked;
        if (x.act_left(a.e(i), x.act_right(x.e(q), b.e(j))) !=
            x.act_right(x.act_left(a.e(i), x.e(q)), b.e(j)))
          r.fail(name + " commutation", "witness (a" + std::to_string(i + 1) + ",x" +
                                            std::to_string(q + 1) + ",b" + std::to_string(j + 1) + ")");
      }
  for (std::size_t q = 0; q < x.dim; ++q) {
    if (a.unit && x.act_left(*a.unit, x.e(q)) != x.e(q))
      r.fail(name + " left unit", "witness x" + std::to_string(q + 1));
    if (b.unit && x.act_right(x.e(q), *b.unit) != x.e(q))
      r.fail(name + " right unit", "witness x" + std::to_string(q + 1));
  }
  return r;
}

// A quotient of a tensor product by a spanned subspace. `projection` maps
// X (x) Y (index x*dimY + y) onto coordinates of the complement spanned by
// the basis vectors listed in `section`.
struct Quotient {
  std::size_t dim = 0;
  Matrix projection;
  std::vector<std::size_t> section;
};

inline Quotient quotient_by(std::size_t total, const std::vector<Vector>& relations) {
  Matrix rel(relations.size(), total);
  for (std::size_t i = 0; i < relations.size(); ++i)
    for (std::size_t j = 0; j < total; ++j) rel(i, j) = relations[i][j];
  RowEchelon e = row_reduce(rel);
  std::vector<bool> pivot(total, false);
  for (std::size_t p : e.pivots) pivot[p] = true;
  Quotient q;
  for (std::size_t j = 0; j < total; ++j)
    if (!pivot[j]) q.section.push_back(j);
  q.dim = q.section.size();
  q.projection = Matrix(q.dim, total);
  // v - sum_r v[pivot_r] * row_r has no pivot coordinates; read the rest.
  for (std::size_t c = 0; c < q.dim; ++c) {
    std::size_t j = q.section[c];
    q.projection(c, j) = 1;
    for (std::size_t r = 0; r < e.pivots.size(); ++r) {
      q.projection(c, e.pivots[r]) -= e.reduced(r, j);
    }
  }
  return q;
}

// X (x)_B Y: the quotient of X (x) Y by (x.b) (x) y - x (x) (b.y).
inline Quotient balanced_tensor(const Bimodule& x, const Bimodule& y, const FinAlgebra& b) {
  std::size_t total = x.dim * y.dim;
  std::vector<Vector> rels;
  for (std::size_t i = 0; i < x.dim; ++i)
    for (std::size_t k = 0; k < b.dim; ++k)
      for (std::size_t j = 0; j < y.dim; ++j) {
        Vector lhs = kron(x.act_right(x.e(i), b.e(k)), y.e(j));
        Vector rhs = kron(x.e(i), y.act_left(b.e(k), y.e(j)));
        Vector d(total);
        for (std::size_t t = 0; t < total; ++t) d[t] = lhs[t] - rhs[t];
        rels.push_back(std::move(d));
      }
  return quotient_by(total, rels);
}

struct MoritaReport {
  Report report;
  Quotient coinvariants;  // of Q (x) R used for bullet (iv)
};

// The four conditions of a Morita context with trace, after the constituent
// algebra and bimodule axioms. Findings are named "bullet (i)".."bullet (iv)".
inline MoritaReport check_morita(const MoritaData& d) {
  d.check_shapes();
  MoritaReport out;
  Report& r = out.report;
  r.merge(check_associative(d.A, "A"));
  r.merge(check_associative(d.B, "B"));
  r.merge(check_bimodule(d.Q, d.A, d.B, "Q"));
  r.merge(check_bimodule(d.R, d.B, d.A, "R"));
  if (!d.A.unit || !d.B.unit) {
    r.warnings.push_back("A or B has no unit; bimodule balance is read in the non-unital sense");
  }
  const auto& A = d.A;
  const auto& B = d.B;
  const auto& Q = d.Q;
  const auto& R = d.R;
  auto alpha = [&](const Vector& q, const Vector& x) { return bilinear(d.alpha, q, x, A.dim); };
  auto beta = [&](const Vector& x, const Vector& q) { return bilinear(d.beta, x, q, B.dim); };
  auto tag = [](const char* s, std::size_t i) { return std::string(s) + std::to_string(i + 1); };

  // (i) alpha is an (A,A)-bimodule map balanced over B; beta is a (B,B)-bimodule map balanced over A.
  for (std::size_t q = 0; q < Q.dim; ++q)
    for (std::size_t x = 0; x < R.dim; ++x) {
      for (std::size_t a = 0; a < A.dim; ++a) {
        r.checked += 2;
        if (alpha(Q.act_left(A.e(a), Q.e(q)), R.e(x)) != A(A.e(a), alpha(Q.e(q), R.e(x))))
          r.fail("bullet (i)", "alpha(a q, r) != a alpha(q, r) at " + tag("a", a) + "," + tag("q", q) + "," + tag("r", x));
        if (alpha(Q.e(q), R.act_right(R.e(x), A.e(a))) != A(alpha(Q.e(q), R.e(x)), A.e(a)))
          r.fail("bullet (i)", "alpha(q, r a) != alpha(q, r) a at " + tag("q", q) + "," + tag("r", x) + "," + tag("a", a));
      }
      for (std::size_t b = 0; b < B.dim; ++b) {
        ++r.checked;
        if (alpha(Q.act_right(Q.e(q), B.e(b)), R.e(x)) != alpha(Q.e(q), R.act_left(B.e(b), R.e(x))))
          r.fail("bullet (i)", "alpha(q b, r) != alpha(q, b r) at " + tag("q", q) + "," + tag("b", b) + "," + tag("r", x));
      }
    }
  for (std::size_t x = 0; x < R.dim; ++x)
    for (std::size_t q = 0; q < Q.dim; ++q) {
      for (std::size_t b = 0; b < B.dim; ++b) {
        r.checked += 2;
        if (beta(R.act_left(B.e(b), R.e(x)), Q.e(q)) != B(B.e(b), beta(R.e(x), Q.e(q))))
          r.fail("bullet (i)", "beta(b r, q) != b beta(r, q) at " + tag("b", b) + "," + tag("r", x) + "," + tag("q", q));
        if (beta(R.e(x), Q.act_right(Q.e(q), B.e(b))) != B(beta(R.e(x), Q.e(q)), B.e(b)))
          r.fail("bullet (i)", "beta(r, q b) != beta(r, q) b at " + tag("r", x) + "," + tag("q", q) + "," + tag("b", b));
      }
      for (std::size_t a = 0; a < A.dim; ++a) {
        ++r.checked;
        if (beta(R.act_right(R.e(x), A.e(a)), Q.e(q)) != beta(R.e(x), Q.act_left(A.e(a), Q.e(q))))
          r.fail("bullet (i)", "beta(r a, q) != beta(r, a q) at " + tag("r", x) + "," + tag("a", a) + "," + tag("q", q));
      }
    }

  // (ii) traces.
  for (std::size_t i = 0; i < A.dim; ++i)
    for (std::size_t j = 0; j < A.dim; ++j) {
      ++r.checked;
      if (d.trA * A(A.e(i), A.e(j)) != d.trA * A(A.e(j), A.e(i)))
        r.fail("bullet (ii)", "trA(ab) != trA(ba) at " + tag("a", i) + "," + tag("a", j));
    }
  for (std::size_t i = 0; i < B.dim; ++i)
    for (std::size_t j = 0; j < B.dim; ++j) {
      ++r.checked;
      if (d.trB * B(B.e(i), B.e(j)) != d.trB * B(B.e(j), B.e(i)))
        r.fail("bullet (ii)", "trB(ab) != trB(ba) at " + tag("b", i) + "," + tag("b", j));
    }

  // (iii) alpha(q,r) q' = q beta(r,q') and beta(r,q) r' = r alpha(q,r').
  for (std::size_t q = 0; q < Q.dim; ++q)
    for (std::size_t x = 0; x < R.dim; ++x)
      for (std::size_t q2 = 0; q2 < Q.dim; ++q2) {
        ++r.checked;
        if (Q.act_left(alpha(Q.e(q), R.e(x)), Q.e(q2)) != Q.act_right(Q.e(q), beta(R.e(x), Q.e(q2))))
          r.fail("bullet (iii)", "alpha(q,r) q' != q beta(r,q') at " + tag("q", q) + "," + tag("r", x) + "," + tag("q", q2));
      }
  for (std::size_t x = 0; x < R.dim; ++x)
    for (std::size_t q = 0; q < Q.dim; ++q)
      for (std::size_t x2 = 0; x2 < R.dim; ++x2) {
        ++r.checked;
        if (R.act_left(beta(R.e(x), Q.e(q)), R.e(x2)) != R.act_right(R.e(x), alpha(Q.e(q), R.e(x2))))
          r.fail("bullet (iii)", "beta(r,q) r' != r alpha(q,r') at " + tag("r", x) + "," + tag("q", q) + "," + tag("r", x2));
      }

  // (iv) trA o alpha = trB o beta o swap on the coinvariants of Q (x) R under
  // qb (x) r ~ q (x) br and aq (x) r ~ q (x) ra.
  std::size_t total = Q.dim * R.dim;
  std::vector<Vector> rels;
  auto push_rel = [&](const Vector& lhs, const Vector& rhs) {
    Vector v(total);
    for (std::size_t t = 0; t < total; ++t) v[t] = lhs[t] - rhs[t];
    rels.push_back(std::move(v));
  };
  for (std::size_t q = 0; q < Q.dim; ++q)
    for (std::size_t x = 0; x < R.dim; ++x) {
      for (std::size_t b = 0; b < B.dim; ++b)
        push_rel(kron(Q.act_right(Q.e(q), B.e(b)), R.e(x)), kron(Q.e(q), R.act_left(B.e(b), R.e(x))));
      for (std::size_t a = 0; a < A.dim; ++a)
        push_rel(kron(Q.act_left(A.e(a), Q.e(q)), R.e(x)), kron(Q.e(q), R.act_right(R.e(x), A.e(a))));
    }
  out.coinvariants = quotient_by(total, rels);
  for (std::size_t j : out.coinvariants.section) {
    ++r.checked;
    std::size_t q = j / R.dim;
    std::size_t x = j % R.dim;
    Vector lhs = d.trA * alpha(Q.e(q), R.e(x));
    Vector rhs = d.trB * beta(R.e(x), Q.e(q));
    if (lhs != rhs) {
      r.fail("bullet (iv)", "trA(alpha(q,r)) != trB(beta(r,q)) on class of " + tag("q", q) + "(x)" + tag("r", x));
    }
  }
  return out;
}

// A non-unital associative algebra with a trace tr: A -> M.
inline Report check_1d_operad(const FinAlgebra& a, std::size_t m, const Matrix& tr) {
  if (tr.rows() != m || tr.cols() != a.dim) throw PreconditionError("trace must be M x dim A");
  Report r = check_associative(FinAlgebra(a.dim, a.mult), "associativity");
  for (Finding& f : r.failures) f.check = "associativity";
  for (std::size_t i = 0; i < a.dim; ++i)
    for (std::size_t j = 0; j < a.dim; ++j) {
      ++r.checked;
      if (tr * a(a.e(i), a.e(j)) != tr * a(a.e(j), a.e(i)))
        r.fail("trace", "tr(ab) != tr(ba) at (e" + std::to_string(i + 1) + ",e" + std::to_string(j + 1) + ")");
    }
  return r;
}

// The n x n matrix algebra; E_ij has index n*i + j.
inline FinAlgebra matrix_algebra(std::size_t n) {
  std::size_t d = n * n;
  Tensor3 c = zero_tensor3(d, d, d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) c[i * n + j][j * n + k][i * n + k] = 1;
  Vector unit(d);
  for (std::size_t i = 0; i < n; ++i) unit[i * n + i] = 1;
  return FinAlgebra(d, std::move(c), std::move(unit));
}

inline Matrix matrix_trace(std::size_t n) {
  Matrix t(1, n * n);
  for (std::size_t i = 0; i < n; ++i) t(0, i * n + i) = 1;
  return t;
}

// A = n x n matrices, B = the ground field, Q = columns, R = rows,
// alpha(q,r) = q r, beta(r,q) = r q, trA = trace, trB = identity.
inline MoritaData matrix_morita_context(std::size_t n) {
  MoritaData d;
  d.A = matrix_algebra(n);
  d.B = matrix_algebra(1);
  Tensor3 ql = zero_tensor3(n * n, n, n), qr = zero_tensor3(n, 1, n);
  Tensor3 rl = zero_tensor3(1, n, n), rr = zero_tensor3(n, n * n, n);
  for (std::size_t i = 0; i < n; ++i) {
    qr[i][0][i] = 1;
    rl[0][i][i] = 1;
    for (std::size_t j = 0; j < n; ++j) {
      ql[i * n + j][j][i] = 1;   // E_ij e_j = e_i
      rr[i][i * n + j][j] = 1;   // e_i E_ij = e_j
    }
  }
  d.Q = Bimodule(n, std::move(ql), std::move(qr));
  d.R = Bimodule(n, std::move(rl), std::move(rr));
  d.alpha = zero_tensor3(n, n, n * n);
  d.beta = zero_tensor3(n, n, 1);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      d.alpha[i][j][i * n + j] = 1;
      if (i == j) d.beta[i][j][0] = 1;
    }
  d.M = 1;
  d.trA = matrix_trace(n);
  d.trB = Matrix::identity(1);
  return d;
}

}  // namespace modop

#endif  // MODOP_MORITA_HPP_
