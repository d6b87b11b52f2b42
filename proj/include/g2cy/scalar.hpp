#pragma once

// Scalar backends shared by every module: float64, exact GMP rationals,
// complex pairs over either, and forward-mode dual numbers used to take exact
// directional derivatives of pointwise nonlinear maps.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <type_traits>

#include <boost/multiprecision/gmp.hpp>

namespace g2cy {

using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;
using BigInt = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                             boost::multiprecision::et_off>;

/// Raised when an exact computation needs a root that is not rational.
class NotExactError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Dual numbers: v + d*eps with eps^2 = 0.

struct Dual {
  double v = 0.0;
  double d = 0.0;

  Dual() = default;
  Dual(double value) : v(value) {}  // NOLINT(google-explicit-constructor)
  Dual(double value, double deriv) : v(value), d(deriv) {}

  Dual& operator+=(const Dual& o) { v += o.v; d += o.d; return *this; }
  Dual& operator-=(const Dual& o) { v -= o.v; d -= o.d; return *this; }
  Dual& operator*=(const Dual& o) { d = d * o.v + v * o.d; v *= o.v; return *this; }
  Dual& operator/=(const Dual& o) {
    d = (d * o.v - v * o.d) / (o.v * o.v);
    v /= o.v;
    return *this;
  }
  friend Dual operator+(Dual a, const Dual& b) { return a += b; }
  friend Dual operator-(Dual a, const Dual& b) { return a -= b; }
  friend Dual operator*(Dual a, const Dual& b) { return a *= b; }
  friend Dual operator/(Dual a, const Dual& b) { return a /= b; }
  friend Dual operator-(const Dual& a) { return {-a.v, -a.d}; }
  friend bool operator==(const Dual& a, const Dual& b) { return a.v == b.v && a.d == b.d; }
  friend bool operator<(const Dual& a, const Dual& b) { return a.v < b.v; }
  friend bool operator>(const Dual& a, const Dual& b) { return a.v > b.v; }
  friend bool operator<=(const Dual& a, const Dual& b) { return a.v <= b.v; }
  friend bool operator>=(const Dual& a, const Dual& b) { return a.v >= b.v; }
};

// ---------------------------------------------------------------------------
// Complex pair over any real scalar. std::complex is unspecified for
// non-floating types, so rationals need their own.

template <class S>
struct Complex {
  S re{};
  S im{};

  Complex() = default;
  Complex(S r) : re(std::move(r)) {}  // NOLINT(google-explicit-constructor)
  Complex(S r, S i) : re(std::move(r)), im(std::move(i)) {}
  Complex(int r) : re(r) {}  // NOLINT(google-explicit-constructor)

  Complex& operator+=(const Complex& o) { re += o.re; im += o.im; return *this; }
  Complex& operator-=(const Complex& o) { re -= o.re; im -= o.im; return *this; }
  Complex& operator*=(const Complex& o) {
    S r = re * o.re - im * o.im;
    im = re * o.im + im * o.re;
    re = std::move(r);
    return *this;
  }
  Complex& operator/=(const Complex& o) {
    S den = o.re * o.re + o.im * o.im;
    S r = (re * o.re + im * o.im) / den;
    im = (im * o.re - re * o.im) / den;
    re = std::move(r);
    return *this;
  }
  friend Complex operator+(Complex a, const Complex& b) { return a += b; }
  friend Complex operator-(Complex a, const Complex& b) { return a -= b; }
  friend Complex operator*(Complex a, const Complex& b) { return a *= b; }
  friend Complex operator/(Complex a, const Complex& b) { return a /= b; }
  friend Complex operator-(const Complex& a) { return {-a.re, -a.im}; }
  friend bool operator==(const Complex& a, const Complex& b) { return a.re == b.re && a.im == b.im; }
  friend bool operator!=(const Complex& a, const Complex& b) { return !(a == b); }
};

template <class S>
Complex<S> conj(const Complex<S>& z) { return {z.re, -z.im}; }

template <class S>
Complex<S> imag_unit() { return {S(0), S(1)}; }

// ---------------------------------------------------------------------------
// Traits.

template <class S> struct is_complex : std::false_type {};
template <class S> struct is_complex<Complex<S>> : std::true_type {};
template <class S> inline constexpr bool is_complex_v = is_complex<S>::value;

template <class S> struct real_of { using type = S; };
template <class S> struct real_of<Complex<S>> { using type = S; };
template <class S> using real_of_t = typename real_of<S>::type;

template <class S> struct is_exact : std::false_type {};
template <> struct is_exact<Rational> : std::true_type {};
template <class S> struct is_exact<Complex<S>> : is_exact<S> {};
template <class S> inline constexpr bool is_exact_v = is_exact<S>::value;

inline bool is_zero(double x) { return x == 0.0; }
inline bool is_zero(const Rational& x) { return x.is_zero(); }
inline bool is_zero(const Dual& x) { return x.v == 0.0 && x.d == 0.0; }
template <class S>
bool is_zero(const Complex<S>& z) { return is_zero(z.re) && is_zero(z.im); }

inline double to_double(double x) { return x; }
inline double to_double(const Rational& x) { return x.convert_to<double>(); }
inline double to_double(const Dual& x) { return x.v; }

/// Magnitude used for pivot ranking and tolerance checks.
inline double magnitude(double x) { return std::abs(x); }
inline double magnitude(const Rational& x) { return std::abs(x.convert_to<double>()); }
inline double magnitude(const Dual& x) { return std::abs(x.v); }
template <class S>
double magnitude(const Complex<S>& z) { return std::hypot(magnitude(z.re), magnitude(z.im)); }

inline int sign_of(double x) { return (x > 0) - (x < 0); }
inline int sign_of(const Rational& x) { return x.sign(); }
inline int sign_of(const Dual& x) { return (x.v > 0) - (x.v < 0); }

inline double real_part(double x) { return x; }
inline Rational real_part(const Rational& x) { return x; }
template <class S>
S real_part(const Complex<S>& z) { return z.re; }

inline double conj(double x) { return x; }
inline Rational conj(const Rational& x) { return x; }
inline Dual conj(const Dual& x) { return x; }

/// Builds p/q in scalar S (exact for rationals).
template <class S>
S ratio(long p, long q) {
  if constexpr (std::is_same_v<S, Rational>) {
    return Rational(p) / Rational(q);
  } else if constexpr (is_complex_v<S>) {
    return S(ratio<real_of_t<S>>(p, q));
  } else {
    return S(static_cast<double>(p) / static_cast<double>(q));
  }
}

// ---------------------------------------------------------------------------
// Roots. Float and dual roots are real-branch roots (odd n keeps the sign);
// rational roots succeed only on perfect powers.

inline double real_root(double x, int n) {
  if (n == 2) {
    if (x < 0) throw std::domain_error("square root of a negative number");
    return std::sqrt(x);
  }
  if (x < 0) {
    if (n % 2 == 0) throw std::domain_error("even root of a negative number");
    return -std::pow(-x, 1.0 / n);
  }
  return std::pow(x, 1.0 / n);
}

inline Dual real_root(const Dual& x, int n) {
  double r = real_root(x.v, n);
  if (r == 0.0) throw std::domain_error("derivative of a root at zero");
  // d/dx x^{1/n} = r / (n x)
  return {r, x.d * r / (n * x.v)};
}

namespace detail {
inline bool integer_root(const BigInt& x, int n, BigInt& out) {
  if (x.sign() < 0) return false;
  mpz_t r;
  mpz_init(r);
  int exact = mpz_root(r, x.backend().data(), static_cast<unsigned long>(n));
  out = BigInt(r);
  mpz_clear(r);
  return exact != 0;
}
}  // namespace detail

inline Rational real_root(const Rational& x, int n) {
  if (x.is_zero()) return Rational(0);
  bool negative = x.sign() < 0;
  if (negative && n % 2 == 0) throw std::domain_error("even root of a negative number");
  BigInt num = boost::multiprecision::numerator(x);
  BigInt den = boost::multiprecision::denominator(x);
  if (negative) num = -num;
  BigInt rn, rd;
  if (!detail::integer_root(num, n, rn) || !detail::integer_root(den, n, rd)) {
    throw NotExactError("root of order " + std::to_string(n) + " of " + x.str() +
                        " is not rational");
  }
  Rational r = Rational(rn) / Rational(rd);
  return negative ? Rational(-r) : r;
}

inline double exact_sqrt(double x) { return real_root(x, 2); }
inline Rational exact_sqrt(const Rational& x) { return real_root(x, 2); }
inline Dual exact_sqrt(const Dual& x) { return real_root(x, 2); }

inline std::string to_string(const Rational& x) { return x.str(); }

}  // namespace g2cy
