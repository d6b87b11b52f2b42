#pragma once

// Alternating forms on R^n (n <= 16) in the coordinate coframe e^0..e^{n-1}.
// A monomial e^{i1}^...^e^{ik} (i1 < ... < ik) is keyed by its bit mask.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "g2cy/linalg.hpp"
#include "g2cy/scalar.hpp"

namespace g2cy {

using Mask = std::uint32_t;

inline int popcount(Mask m) { return std::popcount(m); }

inline Mask full_mask(int dim) { return dim >= 32 ? ~Mask(0) : ((Mask(1) << dim) - 1); }

inline std::vector<int> indices_of(Mask m) {
  std::vector<int> out;
  for (int i = 0; m; ++i, m >>= 1)
    if (m & 1u) out.push_back(i);
  return out;
}

inline Mask mask_of(const std::vector<int>& idx) {
  Mask m = 0;
  for (int i : idx) m |= Mask(1) << i;
  return m;
}

/// Sign of e_A ^ e_B relative to e_{A|B}; 0 when A and B overlap.
inline int wedge_sign(Mask a, Mask b) {
  if (a & b) return 0;
  int swaps = 0;
  while (b) {
    int j = std::countr_zero(b);
    b &= b - 1;
    swaps += popcount(a >> (j + 1));
  }
  return (swaps & 1) ? -1 : 1;
}

/// All masks of the given popcount below 2^dim, in increasing lexicographic
/// order of their index tuples.
inline std::vector<Mask> masks_of_degree(int dim, int degree) {
  std::vector<Mask> out;
  for (Mask m = 0; m <= full_mask(dim); ++m)
    if (popcount(m) == degree) out.push_back(m);
  std::sort(out.begin(), out.end(), [](Mask x, Mask y) { return indices_of(x) < indices_of(y); });
  return out;
}

inline std::string mask_label(Mask m, const std::vector<std::string>& names = {}) {
  if (m == 0) return "1";
  std::string s;
  for (int i : indices_of(m)) {
    if (!s.empty()) s += '^';
    s += (static_cast<std::size_t>(i) < names.size()) ? names[static_cast<std::size_t>(i)] : "e" + std::to_string(i + 1);
  }
  return s;
}

template <class S>
class AltForm {
 public:
  using Term = std::pair<Mask, S>;

  AltForm() = default;
  AltForm(int dim, int degree) : dim_(dim), degree_(degree) {
    if (dim < 0 || dim > 16 || degree < 0 || degree > dim) throw DimensionError("invalid form dimension/degree");
  }

  static AltForm scalar(int dim, const S& c) {
    AltForm f(dim, 0);
    f.add(0, c);
    return f;
  }

  /// Monomial c * e^{i1}^...^e^{ik}; indices need not be sorted.
  static AltForm monomial(int dim, const std::vector<int>& idx, const S& c = S(1)) {
    AltForm f(dim, static_cast<int>(idx.size()));
    std::vector<int> sorted = idx;
    int sign = 1;
    for (std::size_t i = 0; i < sorted.size(); ++i)
      for (std::size_t j = i + 1; j < sorted.size(); ++j) {
        if (sorted[i] == sorted[j]) return f;
        if (sorted[i] > sorted[j]) {
          std::swap(sorted[i], sorted[j]);
          sign = -sign;
        }
      }
    for (int i : sorted)
      if (i < 0 || i >= dim) throw DimensionError("basis index out of range");
    f.add(mask_of(sorted), sign > 0 ? c : S(-c));
    return f;
  }

  static AltForm covector(const Vec<S>& v) {
    AltForm f(static_cast<int>(v.size()), 1);
    for (std::size_t i = 0; i < v.size(); ++i) f.add(Mask(1) << i, v[i]);
    return f;
  }

  int dim() const { return dim_; }
  int degree() const { return degree_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  S coeff(Mask m) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), m, [](const Term& t, Mask k) { return t.first < k; });
    return (it != terms_.end() && it->first == m) ? it->second : S(0);
  }
  S coeff(const std::vector<int>& increasing) const { return coeff(mask_of(increasing)); }

  /// Coefficients keyed by strictly increasing index tuples.
  std::map<std::vector<int>, S> coeffs() const {
    std::map<std::vector<int>, S> out;
    for (const auto& [m, c] : terms_) out.emplace(indices_of(m), c);
    return out;
  }

  /// Adds c to the coefficient of monomial m, keeping the storage canonical.
  void add(Mask m, const S& c) {
    if (popcount(m) != degree_ || (m & ~full_mask(dim_))) throw DimensionError("monomial does not match form degree");
    if (is_zero_value(c)) return;
    auto it = std::lower_bound(terms_.begin(), terms_.end(), m, [](const Term& t, Mask k) { return t.first < k; });
    if (it != terms_.end() && it->first == m) {
      it->second += c;
      if (is_zero_value(it->second)) terms_.erase(it);
    } else {
      terms_.insert(it, {m, c});
    }
  }

  AltForm& operator+=(const AltForm& o) {
    check_compatible(o);
    std::vector<Term> merged;
    merged.reserve(terms_.size() + o.terms_.size());
    auto a = terms_.begin();
    auto b = o.terms_.begin();
    while (a != terms_.end() || b != o.terms_.end()) {
      if (b == o.terms_.end() || (a != terms_.end() && a->first < b->first)) {
        merged.push_back(*a++);
      } else if (a == terms_.end() || b->first < a->first) {
        merged.push_back(*b++);
      } else {
        S c = a->second + b->second;
        if (!is_zero_value(c)) merged.emplace_back(a->first, c);
        ++a;
        ++b;
      }
    }
    terms_ = std::move(merged);
    return *this;
  }
  AltForm& operator-=(const AltForm& o) { return *this += -o; }
  AltForm& operator*=(const S& s) {
    if (is_zero_value(s)) {
      terms_.clear();
      return *this;
    }
    for (auto& t : terms_) t.second *= s;
    std::erase_if(terms_, [](const Term& t) { return is_zero_value(t.second); });
    return *this;
  }
  friend AltForm operator+(AltForm a, const AltForm& b) { return a += b; }
  friend AltForm operator-(AltForm a, const AltForm& b) { return a -= b; }
  friend AltForm operator*(AltForm a, const S& s) { return a *= s; }
  friend AltForm operator*(const S& s, AltForm a) { return a *= s; }
  friend AltForm operator-(AltForm a) {
    for (auto& t : a.terms_) t.second = -t.second;
    return a;
  }
  friend bool operator==(const AltForm& a, const AltForm& b) {
    return a.dim_ == b.dim_ && a.degree_ == b.degree_ && a.terms_ == b.terms_;
  }
  friend bool operator!=(const AltForm& a, const AltForm& b) { return !(a == b); }

  /// Largest coefficient magnitude.
  double max_abs() const {
    double m = 0;
    for (const auto& t : terms_) m = std::max(m, magnitude(t.second));
    return m;
  }

  /// Applies f to every coefficient (zero results dropped).
  template <class T, class F>
  AltForm<T> map(F&& f) const {
    AltForm<T> out(dim_, degree_);
    for (const auto& [m, c] : terms_) out.add(m, f(c));
    return out;
  }

 private:
  static bool is_zero_value(const S& c) { return g2cy::is_zero(c); }
  void check_compatible(const AltForm& o) const {
    if (dim_ != o.dim_ || degree_ != o.degree_) throw DimensionError("form dimension/degree mismatch");
  }

  int dim_ = 0;
  int degree_ = 0;
  std::vector<Term> terms_;
};

template <class S>
AltForm<S> wedge(const AltForm<S>& a, const AltForm<S>& b) {
  if (a.dim() != b.dim()) throw DimensionError("wedge: dimension mismatch");
  const int deg = a.degree() + b.degree();
  AltForm<S> out(a.dim(), std::min(deg, a.dim()));
  if (deg > a.dim()) return AltForm<S>(a.dim(), a.dim());
  std::map<Mask, S> acc;
  for (const auto& [ma, ca] : a.terms())
    for (const auto& [mb, cb] : b.terms()) {
      int s = wedge_sign(ma, mb);
      if (s == 0) continue;
      S p = ca * cb;
      auto [it, inserted] = acc.try_emplace(ma | mb, S(0));
      if (s > 0) it->second += p; else it->second -= p;
    }
  for (const auto& [m, c] : acc) out.add(m, c);
  return out;
}

/// Wedge of a list of forms, left to right.
template <class S>
AltForm<S> wedge_all(const std::vector<AltForm<S>>& forms) {
  if (forms.empty()) throw DimensionError("wedge_all of nothing");
  AltForm<S> acc = forms.front();
  for (std::size_t i = 1; i < forms.size(); ++i) acc = wedge(acc, forms[i]);
  return acc;
}

/// Interior product i_v alpha (contraction in the first slot).
template <class S>
AltForm<S> interior(const Vec<S>& v, const AltForm<S>& a) {
  if (static_cast<int>(v.size()) != a.dim()) throw DimensionError("interior: dimension mismatch");
  if (a.degree() == 0) throw DimensionError("interior: degree 0 form");
  std::map<Mask, S> acc;
  for (const auto& [m, c] : a.terms()) {
    int pos = 0;
    for (int i : indices_of(m)) {
      const S& vi = v[static_cast<std::size_t>(i)];
      if (!is_zero(vi)) {
        S p = c * vi;
        auto [it, ins] = acc.try_emplace(m & ~(Mask(1) << i), S(0));
        if (pos % 2 == 0) it->second += p; else it->second -= p;
      }
      ++pos;
    }
  }
  AltForm<S> out(a.dim(), a.degree() - 1);
  for (const auto& [m, c] : acc) out.add(m, c);
  return out;
}

/// Contraction with the i-th coordinate vector.
template <class S>
AltForm<S> interior_basis(int i, const AltForm<S>& a) {
  Vec<S> v(static_cast<std::size_t>(a.dim()), S(0));
  v[static_cast<std::size_t>(i)] = S(1);
  return interior(v, a);
}

/// Coefficient of e^0^...^e^{n-1} of a top-degree form.
template <class S>
S top_coefficient(const AltForm<S>& a) {
  if (a.degree() != a.dim()) throw DimensionError("top_coefficient: not a top-degree form");
  return a.coeff(full_mask(a.dim()));
}

/// Pullback by the linear map v -> A v: (A^*e^j) = sum_i A(j,i) e^i.
template <class S>
AltForm<S> pullback_linear(const Matrix<S>& A, const AltForm<S>& a) {
  const int n = a.dim();
  if (A.rows() != n || A.cols() != n) throw DimensionError("pullback_linear: matrix shape mismatch");
  std::vector<AltForm<S>> rows;
  rows.reserve(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    AltForm<S> r(n, 1);
    for (int i = 0; i < n; ++i) r.add(Mask(1) << i, A(j, i));
    rows.push_back(std::move(r));
  }
  AltForm<S> out(n, a.degree());
  for (const auto& [m, c] : a.terms()) {
    AltForm<S> piece = AltForm<S>::scalar(n, c);
    for (int j : indices_of(m)) piece = wedge(piece, rows[static_cast<std::size_t>(j)]);
    out += piece;
  }
  return out;
}

/// Restricts to the span of the given coordinate vectors, relabelled 0..k-1.
/// Monomials involving other indices are dropped.
template <class S>
AltForm<S> restrict_to(const AltForm<S>& a, const std::vector<int>& keep) {
  const int k = static_cast<int>(keep.size());
  AltForm<S> out(k, std::min(a.degree(), k));
  if (a.degree() > k) return out;
  Mask allowed = mask_of(keep);
  for (const auto& [m, c] : a.terms()) {
    if (m & ~allowed) continue;
    Mask nm = 0;
    for (int j = 0; j < k; ++j)
      if (m & (Mask(1) << keep[static_cast<std::size_t>(j)])) nm |= Mask(1) << j;
    out.add(nm, c);
  }
  return out;
}

/// Inverse of restrict_to: places a form on R^k into R^n along `slots`.
template <class S>
AltForm<S> extend_to(const AltForm<S>& a, int dim, const std::vector<int>& slots) {
  if (static_cast<int>(slots.size()) != a.dim()) throw DimensionError("extend_to: slot count mismatch");
  for (std::size_t i = 1; i < slots.size(); ++i)
    if (slots[i] <= slots[i - 1]) throw DimensionError("extend_to: slots must increase");
  AltForm<S> out(dim, a.degree());
  for (const auto& [m, c] : a.terms()) {
    Mask nm = 0;
    for (int i : indices_of(m)) nm |= Mask(1) << slots[static_cast<std::size_t>(i)];
    out.add(nm, c);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Metrics and orientation.

template <class S>
class BilinearForm {
 public:
  BilinearForm() = default;
  explicit BilinearForm(Matrix<S> m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols()) throw DimensionError("bilinear form must be square");
    if (!m_.is_symmetric()) throw std::invalid_argument("bilinear form must be symmetric");
  }
  /// Averages m with its transpose (for float matrices with rounding asymmetry).
  static BilinearForm symmetrized(const Matrix<S>& m) {
    Matrix<S> s = m + m.transpose();
    s *= ratio<S>(1, 2);
    return BilinearForm(s);
  }
  static BilinearForm euclidean(int dim) { return BilinearForm(Matrix<S>::identity(dim)); }

  int dim() const { return m_.rows(); }
  const Matrix<S>& matrix() const { return m_; }
  S operator()(const Vec<S>& u, const Vec<S>& v) const {
    S acc(0);
    for (int i = 0; i < dim(); ++i)
      for (int j = 0; j < dim(); ++j) acc += u[static_cast<std::size_t>(i)] * m_(i, j) * v[static_cast<std::size_t>(j)];
    return acc;
  }
  bool is_positive_definite() const { return g2cy::is_positive_definite(m_); }
  friend bool operator==(const BilinearForm& a, const BilinearForm& b) { return a.m_ == b.m_; }

 private:
  Matrix<S> m_;
};

struct OrientedFrame {
  int dim = 0;
  std::vector<std::string> labels;
  int sign = 1;

  static OrientedFrame standard(int dim, int sign = 1) {
    OrientedFrame f;
    f.dim = dim;
    f.sign = sign;
    for (int i = 0; i < dim; ++i) f.labels.push_back("e" + std::to_string(i + 1));
    return f;
  }
  OrientedFrame reversed() const {
    OrientedFrame f = *this;
    f.sign = -sign;
    return f;
  }
};

inline void check_frame(const OrientedFrame& o, int dim) {
  if (o.dim != dim) throw DimensionError("frame dimension mismatch");
  if (o.sign != 1 && o.sign != -1) throw std::invalid_argument("orientation sign must be +1 or -1");
}

class NotPositiveDefiniteError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Volume form o * sqrt(det g) e^0^...^e^{n-1}.
template <class S>
AltForm<S> volume_form(const BilinearForm<S>& g, const OrientedFrame& o) {
  check_frame(o, g.dim());
  if (!g.is_positive_definite()) throw NotPositiveDefiniteError("metric is not positive-definite");
  S s = exact_sqrt(determinant(g.matrix()));
  AltForm<S> vol(g.dim(), g.dim());
  vol.add(full_mask(g.dim()), o.sign > 0 ? s : S(-s));
  return vol;
}

/// Induced inner product on k-forms.
template <class S>
S inner(const AltForm<S>& a, const AltForm<S>& b, const BilinearForm<S>& g) {
  if (a.dim() != g.dim() || b.dim() != g.dim() || a.degree() != b.degree()) throw DimensionError("inner: shape mismatch");
  AltForm<S> raised = pullback_linear(inverse(g.matrix()), b);
  S acc(0);
  for (const auto& [m, c] : a.terms()) acc += c * raised.coeff(m);
  return acc;
}

/// Hodge star with *1 = vol_g and <a,b> vol = a ^ *b. `ginv` and `scale`
/// (= o sqrt(det g)) may be supplied to avoid recomputation.
template <class S>
AltForm<S> hodge_with(const AltForm<S>& a, const Matrix<S>& ginv, const S& scale) {
  const int n = a.dim();
  const Mask all = full_mask(n);
  AltForm<S> raised = pullback_linear(ginv, a);
  AltForm<S> out(n, n - a.degree());
  for (const auto& [m, c] : raised.terms()) {
    Mask comp = all & ~m;
    S v = c * scale;
    out.add(comp, wedge_sign(m, comp) > 0 ? v : S(-v));
  }
  return out;
}

template <class S>
AltForm<S> hodge(const AltForm<S>& a, const BilinearForm<S>& g, const OrientedFrame& o) {
  if (a.dim() != g.dim()) throw DimensionError("hodge: dimension mismatch");
  check_frame(o, g.dim());
  if (!g.is_positive_definite()) throw NotPositiveDefiniteError("hodge: metric is not positive-definite");
  S s = exact_sqrt(determinant(g.matrix()));
  if (o.sign < 0) s = -s;
  return hodge_with(a, inverse(g.matrix()), s);
}

template <class S>
AltForm<S> flat(const Vec<S>& v, const BilinearForm<S>& g) {
  if (static_cast<int>(v.size()) != g.dim()) throw DimensionError("flat: dimension mismatch");
  if (determinant(g.matrix()) == S(0)) throw SingularMatrixError("flat: degenerate metric");
  return AltForm<S>::covector(g.matrix() * v);
}

template <class S>
Vec<S> sharp(const AltForm<S>& xi, const BilinearForm<S>& g) {
  if (xi.degree() != 1 || xi.dim() != g.dim()) throw DimensionError("sharp: expects a 1-form of matching dimension");
  Vec<S> c(static_cast<std::size_t>(xi.dim()), S(0));
  for (const auto& [m, v] : xi.terms()) c[static_cast<std::size_t>(std::countr_zero(m))] = v;
  try {
    return solve(g.matrix(), c);
  } catch (const SingularMatrixError&) {
    throw SingularMatrixError("sharp: degenerate metric");
  }
}

/// Components of a 1-form as a vector.
template <class S>
Vec<S> components(const AltForm<S>& xi) {
  if (xi.degree() != 1) throw DimensionError("components: expects a 1-form");
  Vec<S> c(static_cast<std::size_t>(xi.dim()), S(0));
  for (const auto& [m, v] : xi.terms()) c[static_cast<std::size_t>(std::countr_zero(m))] = v;
  return c;
}

template <class To, class From>
AltForm<To> convert_form(const AltForm<From>& a) {
  return a.template map<To>([](const From& c) { return To(to_double(c)); });
}

template <class S>
std::string to_string(const AltForm<S>& a, const std::vector<std::string>& names = {}) {
  if (a.is_zero()) return "0";
  std::string s;
  for (const auto& [m, c] : a.terms()) {
    if (!s.empty()) s += " + ";
    if constexpr (std::is_same_v<S, Rational>) s += "(" + c.str() + ")"; else s += "(" + std::to_string(to_double(c)) + ")";
    if (m) s += " " + mask_label(m, names);
  }
  return s;
}

}  // namespace g2cy
