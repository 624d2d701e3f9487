#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace maassden {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

// ---------------------------------------------------------------------------
// errors

enum class errc {
  invalid_parameter,
  pole,
  overflow,
  truncation,
  non_convergence,
  precondition,
  hypothesis,
  missing_coefficient,
  parse,
  invariant,
  config,
};

inline const char* errc_name(errc c) {
  switch (c) {
    case errc::invalid_parameter: return "invalid_parameter";
    case errc::pole: return "pole";
    case errc::overflow: return "overflow";
    case errc::truncation: return "truncation";
    case errc::non_convergence: return "non_convergence";
    case errc::precondition: return "precondition";
    case errc::hypothesis: return "hypothesis";
    case errc::missing_coefficient: return "missing_coefficient";
    case errc::parse: return "parse";
    case errc::invariant: return "invariant";
    case errc::config: return "config";
  }
  return "unknown";
}

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

// Thrown by adaptive routines that ran out of budget; keeps what was reached.
class convergence_error : public error {
 public:
  convergence_error(const std::string& what, cplx best, double achieved)
      : error(errc::non_convergence, what), best_(best), achieved_(achieved) {}
  cplx best_estimate() const noexcept { return best_; }
  double achieved_error() const noexcept { return achieved_; }

 private:
  cplx best_;
  double achieved_;
};

class parse_error : public error {
 public:
  parse_error(std::size_t line, const std::string& what)
      : error(errc::parse, "line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class invariant_error : public error {
 public:
  invariant_error(const std::string& field, const std::string& what)
      : error(errc::invariant, field + ": " + what), field_(field) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class missing_coefficient_error : public error {
 public:
  missing_coefficient_error(std::vector<long> primes, const std::string& what)
      : error(errc::missing_coefficient, what), primes_(std::move(primes)) {}
  const std::vector<long>& primes() const noexcept { return primes_; }

 private:
  std::vector<long> primes_;
};

inline void require(bool ok, errc code, const std::string& what) {
  if (!ok) throw error(code, what);
}

inline bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

inline cplx checked(cplx z, const char* where) {
  if (!finite(z)) throw error(errc::overflow, std::string(where) + ": non-finite result");
  return z;
}

// ---------------------------------------------------------------------------
// compensated summation (Neumaier)

template <class T>
class compensated_sum {
 public:
  void add(T x) {
    T t = sum_ + x;
    if (abs_(sum_) >= abs_(x))
      c_ += (sum_ - t) + x;
    else
      c_ += (x - t) + sum_;
    sum_ = t;
  }
  compensated_sum& operator+=(T x) {
    add(x);
    return *this;
  }
  T value() const { return sum_ + c_; }

 private:
  static double abs_(double x) { return std::fabs(x); }
  static double abs_(cplx z) { return std::fabs(z.real()) + std::fabs(z.imag()); }
  T sum_{};
  T c_{};
};

template <>
class compensated_sum<cplx> {
 public:
  void add(cplx x) {
    re_.add(x.real());
    im_.add(x.imag());
  }
  compensated_sum& operator+=(cplx x) {
    add(x);
    return *this;
  }
  cplx value() const { return {re_.value(), im_.value()}; }

 private:
  compensated_sum<double> re_, im_;
};

// Pairwise reduction in a fixed order; bit-reproducible for a given input.
template <class T>
T pairwise_sum(const T* x, std::size_t n) {
  if (n == 0) return T{};
  if (n <= 8) {
    compensated_sum<T> s;
    for (std::size_t i = 0; i < n; ++i) s.add(x[i]);
    return s.value();
  }
  std::size_t h = n / 2;
  return pairwise_sum(x, h) + pairwise_sum(x + h, n - h);
}

template <class T>
T pairwise_sum(const std::vector<T>& v) {
  return pairwise_sum(v.data(), v.size());
}

// ---------------------------------------------------------------------------
// threads

inline unsigned thread_count() {
  if (const char* s = std::getenv("MAASSDEN_THREADS")) {
    long v = std::strtol(s, nullptr, 10);
    if (v >= 1 && v <= 1024) return static_cast<unsigned>(v);
  }
  return 1;
}

// Runs f(i) for i in [0, n); each index must write only its own output slot.
template <class F>
void parallel_for(std::size_t n, F&& f) {
  unsigned nt = thread_count();
  if (nt <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  nt = static_cast<unsigned>(std::min<std::size_t>(nt, n));
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errs(nt);
  for (unsigned t = 0; t < nt; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < n; i += nt) f(i);
      } catch (...) {
        errs[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
}

}  // namespace maassden
