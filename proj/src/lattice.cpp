#include "mulcov/lattice.hpp"

#include <algorithm>
#include <set>

#include "mulcov/errors.hpp"

namespace mulcov {

std::string atom_string(const Atom& a) {
  if (std::holds_alternative<Int>(a)) return std::get<Int>(a).get_str();
  return std::get<std::string>(a);
}

IntMat upper_hnf(const IntMat& a) {
  IntMat h = a;
  const long rows = h.rows(), cols = h.cols();
  long top = 0;
  for (long col = 0; col < cols && top < rows; ++col) {
    // gcd-reduce the column below `top` until one nonzero entry remains
    while (true) {
      long imin = -1;
      for (long i = top; i < rows; ++i) {
        if (h(i, col) != 0 && (imin < 0 || iabs(h(i, col)) < iabs(h(imin, col))))
          imin = i;
      }
      if (imin < 0) break;
      bool others = false;
      for (long i = top; i < rows; ++i) {
        if (i == imin || h(i, col) == 0) continue;
        Int q = fdiv_q(h(i, col), h(imin, col));
        if (q != 0) h.row(i) -= q * h.row(imin);
        if (h(i, col) != 0) others = true;
      }
      if (!others) {
        h.row(imin).swap(h.row(top));
        break;
      }
    }
    if (h(top, col) == 0) continue;
    if (h(top, col) < 0) h.row(top) = -h.row(top);
    for (long i = 0; i < top; ++i) {
      Int q = fdiv_q(h(i, col), h(top, col));
      if (q != 0) h.row(i) -= q * h.row(top);
    }
    ++top;
  }
  return h.topRows(top).eval();
}

namespace {

IntMat reverse_cols(const IntMat& a) {
  IntMat r(a.rows(), a.cols());
  for (long j = 0; j < a.cols(); ++j) r.col(j) = a.col(a.cols() - 1 - j);
  return r;
}

IntMat reverse_rows(const IntMat& a) {
  IntMat r(a.rows(), a.cols());
  for (long i = 0; i < a.rows(); ++i) r.row(i) = a.row(a.rows() - 1 - i);
  return r;
}

}  // namespace

IntMat lower_hnf(const IntMat& a) {
  return reverse_rows(reverse_cols(upper_hnf(reverse_cols(a))));
}

SmithDecomposition smith(const IntMat& a) {
  const long rows = a.rows(), cols = a.cols();
  SmithDecomposition d;
  d.s = a;
  d.u = IntMat::Identity(rows, rows);
  d.v = IntMat::Identity(cols, cols);
  IntMat& s = d.s;

  long t = 0;
  while (true) {
    long pi = -1, pj = -1;
    for (long i = t; i < rows; ++i)
      for (long j = t; j < cols; ++j)
        if (s(i, j) != 0 && (pi < 0 || iabs(s(i, j)) < iabs(s(pi, pj)))) {
          pi = i;
          pj = j;
        }
    if (pi < 0) break;
    s.row(t).swap(s.row(pi));
    d.u.row(t).swap(d.u.row(pi));
    s.col(t).swap(s.col(pj));
    d.v.col(t).swap(d.v.col(pj));

    bool clean = false;
    while (!clean) {
      clean = true;
      for (long i = t + 1; i < rows; ++i) {
        if (s(i, t) == 0) continue;
        Int q = fdiv_q(s(i, t), s(t, t));
        if (q != 0) {
          s.row(i) -= q * s.row(t);
          d.u.row(i) -= q * d.u.row(t);
        }
        if (s(i, t) != 0) {
          s.row(t).swap(s.row(i));
          d.u.row(t).swap(d.u.row(i));
          clean = false;
        }
      }
      for (long j = t + 1; j < cols; ++j) {
        if (s(t, j) == 0) continue;
        Int q = fdiv_q(s(t, j), s(t, t));
        if (q != 0) {
          s.col(j) -= q * s.col(t);
          d.v.col(j) -= q * d.v.col(t);
        }
        if (s(t, j) != 0) {
          s.col(t).swap(s.col(j));
          d.v.col(t).swap(d.v.col(j));
          clean = false;
        }
      }
    }

    // enforce divisibility of the remaining block by s(t,t)
    bool restart = false;
    for (long i = t + 1; i < rows && !restart; ++i)
      for (long j = t + 1; j < cols && !restart; ++j)
        if (mod_floor(s(i, j), s(t, t)) != 0) {
          s.row(t) += s.row(i);
          d.u.row(t) += d.u.row(i);
          restart = true;
        }
    if (restart) continue;

    if (s(t, t) < 0) {
      s.row(t) = -s.row(t);
      d.u.row(t) = -d.u.row(t);
    }
    ++t;
  }
  return d;
}

std::vector<Int> smith_invariants(const IntMat& a) {
  SmithDecomposition d = smith(a);
  std::vector<Int> out;
  long n = std::min(d.s.rows(), d.s.cols());
  for (long i = 0; i < n; ++i)
    if (d.s(i, i) != 0) out.push_back(d.s(i, i));
  return out;
}

long rank(const IntMat& a) { return upper_hnf(a).rows(); }

IntMat col_kernel(const IntMat& a) {
  if (a.cols() == 0) return IntMat(0, 0);
  SmithDecomposition d = smith(a);
  long r = 0;
  long n = std::min(d.s.rows(), d.s.cols());
  while (r < n && d.s(r, r) != 0) ++r;
  IntMat out(a.cols() - r, a.cols());
  for (long j = r; j < a.cols(); ++j) out.row(j - r) = d.v.col(j).transpose();
  return out;
}

IntMat saturate_rows(const IntMat& a) {
  if (a.cols() == 0) return IntMat(0, 0);
  IntMat k = col_kernel(a);
  IntMat sat = col_kernel(k);
  return lower_hnf(sat);
}

Int abs_det(const IntMat& a) {
  IntMat h = upper_hnf(a);
  if (h.rows() != a.rows() || a.rows() != a.cols())
    throw std::logic_error("abs_det: non-square or singular");
  Int det = 1;
  long col = 0;
  for (long i = 0; i < h.rows(); ++i) {
    while (col < h.cols() && h(i, col) == 0) ++col;
    det *= h(i, col);
  }
  return det;
}

std::optional<IntVec> solve_in_rows(const IntMat& hnf_basis, const IntVec& v) {
  const long k = hnf_basis.rows();
  IntVec rest = v;
  IntVec coords = IntVec::Zero(k);
  for (long i = k - 1; i >= 0; --i) {
    long piv = hnf_basis.cols() - 1;
    while (piv >= 0 && hnf_basis(i, piv) == 0) --piv;
    const Int& p = hnf_basis(i, piv);
    if (mod_floor(rest(piv), p) != 0) return std::nullopt;
    coords(i) = divexact(rest(piv), p);
    if (coords(i) != 0) rest -= (coords(i) * hnf_basis.row(i)).transpose();
  }
  for (long j = 0; j < rest.size(); ++j)
    if (rest(j) != 0) return std::nullopt;
  return coords;
}

NormalForm normal_form(const ExponentLattice& l) {
  NormalForm out;
  out.hnf.support = l.support;
  out.hnf.rows = lower_hnf(l.rows);
  out.snf_diagonal = smith_invariants(l.rows);
  return out;
}

ExponentLattice saturate(const ExponentLattice& l) {
  return ExponentLattice{l.support, saturate_rows(l.rows)};
}

std::optional<IntVec> member(const ExponentLattice& l,
                             const std::vector<Atom>& support, const IntVec& v) {
  if (v.size() != (long)support.size())
    fail(errc::support_mismatch, "vector length differs from its support");
  IntVec aligned = IntVec::Zero(l.support.size());
  for (long j = 0; j < v.size(); ++j) {
    if (v(j) == 0) continue;
    auto it = std::lower_bound(l.support.begin(), l.support.end(), support[j]);
    if (it == l.support.end() || *it != support[j])
      fail(errc::support_mismatch,
           "vector uses " + atom_string(support[j]) + " outside lattice support");
    aligned(it - l.support.begin()) = v(j);
  }
  return solve_in_rows(lower_hnf(l.rows), aligned);
}

std::optional<Int> group_index(const ExponentLattice& sub,
                               const ExponentLattice& super) {
  std::set<Atom> atoms(sub.support.begin(), sub.support.end());
  atoms.insert(super.support.begin(), super.support.end());
  std::vector<Atom> common(atoms.begin(), atoms.end());
  IntMat hsub = lower_hnf(reindex(sub, common).rows);
  IntMat hsup = lower_hnf(reindex(super, common).rows);
  IntMat coords(hsub.rows(), hsup.rows());
  for (long i = 0; i < hsub.rows(); ++i) {
    auto c = solve_in_rows(hsup, hsub.row(i).transpose());
    if (!c) fail(errc::not_a_subgroup, "first lattice is not contained in second");
    coords.row(i) = c->transpose();
  }
  if (hsub.rows() < hsup.rows()) return std::nullopt;
  return abs_det(coords);
}

ExponentLattice lattice_of_tuple(const std::vector<FactoredRational>& t) {
  std::set<Atom> atoms;
  for (auto& f : t)
    for (auto& [p, e] : f.exponents) atoms.insert(Atom(p));
  ExponentLattice l;
  l.support.assign(atoms.begin(), atoms.end());
  l.rows = IntMat::Zero(t.size(), l.support.size());
  for (size_t i = 0; i < t.size(); ++i)
    for (auto& [p, e] : t[i].exponents) {
      long j = std::lower_bound(l.support.begin(), l.support.end(), Atom(p)) -
               l.support.begin();
      l.rows((long)i, j) = e;
    }
  return l;
}

bool is_mult_independent(const std::vector<FactoredRational>& t) {
  ExponentLattice l = lattice_of_tuple(t);
  return rank(l.rows) == l.rows.rows();
}

std::optional<RatVec> solve_rational(const RatMat& a, const RatVec& b) {
  RatMat m(a.rows(), a.cols() + 1);
  m.leftCols(a.cols()) = a;
  m.col(a.cols()) = b;
  long rows = m.rows(), cols = a.cols();
  std::vector<long> pivot_col(rows, -1);
  long r = 0;
  for (long c = 0; c < cols && r < rows; ++c) {
    long p = -1;
    for (long i = r; i < rows; ++i)
      if (m(i, c) != 0) {
        p = i;
        break;
      }
    if (p < 0) continue;
    m.row(p).swap(m.row(r));
    m.row(r) /= m(r, c);
    for (long i = 0; i < rows; ++i)
      if (i != r && m(i, c) != 0) m.row(i) -= m(i, c) * m.row(r);
    pivot_col[r] = c;
    ++r;
  }
  for (long i = r; i < rows; ++i)
    if (m(i, cols) != 0) return std::nullopt;
  RatVec x = RatVec::Constant(cols, Rat(0));
  for (long i = 0; i < r; ++i) x(pivot_col[i]) = m(i, cols);
  return x;
}

ExponentLattice reindex(const ExponentLattice& l,
                        const std::vector<Atom>& support) {
  ExponentLattice out;
  out.support = support;
  out.rows = IntMat::Zero(l.rows.rows(), support.size());
  for (long j = 0; j < (long)l.support.size(); ++j) {
    auto it = std::lower_bound(support.begin(), support.end(), l.support[j]);
    if (it == support.end() || *it != l.support[j]) {
      bool used = false;
      for (long i = 0; i < l.rows.rows(); ++i)
        if (l.rows(i, j) != 0) used = true;
      if (!used) continue;
      fail(errc::support_mismatch, "target support misses " +
                                       atom_string(l.support[j]));
    }
    out.rows.col(it - support.begin()) = l.rows.col(j);
  }
  return out;
}

}  // namespace mulcov
