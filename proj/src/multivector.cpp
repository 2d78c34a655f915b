#include "cliffsurf/multivector.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <sstream>

namespace cliffsurf {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NotInvertible: return "NotInvertible";
    case ErrorCode::DegenerateMetric: return "DegenerateMetric";
    case ErrorCode::GridTooSmall: return "GridTooSmall";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::NotClosed: return "NotClosed";
    case ErrorCode::NotSphereValued: return "NotSphereValued";
    case ErrorCode::NotMinimal: return "NotMinimal";
    case ErrorCode::NotHolomorphic: return "NotHolomorphic";
    case ErrorCode::WedgeNotZero: return "WedgeNotZero";
    case ErrorCode::IllConditionedChi: return "IllConditionedChi";
    case ErrorCode::SigmaZero: return "SigmaZero";
    case ErrorCode::CommutatorNonzero: return "CommutatorNonzero";
    case ErrorCode::NotGrade2: return "NotGrade2";
    case ErrorCode::RCapExceeded: return "RCapExceeded";
    case ErrorCode::DegenerateStep: return "DegenerateStep";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

void check_dimension(int r) {
  if (r < kMinDimension || r > kMaxDimension) {
    throw Error(ErrorCode::OutOfRange,
                "ambient dimension r=" + std::to_string(r) + " outside [3, 16]");
  }
}

namespace {

constexpr int kTableDim = 8;
constexpr std::size_t kTableSize = std::size_t{1} << kTableDim;

// Product signs for all blade pairs with r <= 8.
const std::array<std::int8_t, kTableSize * kTableSize>& sign_table() {
  static const auto table = [] {
    std::array<std::int8_t, kTableSize * kTableSize> t{};
    for (Mask a = 0; a < kTableSize; ++a)
      for (Mask b = 0; b < kTableSize; ++b)
        t[a * kTableSize + b] = static_cast<std::int8_t>(blade_sign(a, b));
    return t;
  }();
  return table;
}

void drop_zeros(Multivector::Storage& terms) {
  terms.erase(std::remove_if(terms.begin(), terms.end(), [](const Term& t) { return t.coeff == 0.0; }),
              terms.end());
}

}  // namespace

Multivector::Multivector(int r, double tol) : r_(r), tol_(tol) {
  check_dimension(r);
  if (!(tol >= 0.0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be nonnegative");
}

Multivector Multivector::scalar(int r, double value) { return blade(r, 0, value); }

Multivector Multivector::blade(int r, Mask mask, double coeff) {
  Multivector out(r);
  if (mask >= (Mask{1} << r)) {
    throw Error(ErrorCode::OutOfRange, "blade mask exceeds 2^r");
  }
  if (coeff != 0.0) out.terms_.push_back({mask, coeff});
  return out;
}

Multivector Multivector::vector(int r, std::span<const double> comps) {
  if (static_cast<int>(comps.size()) > r) {
    throw Error(ErrorCode::DimensionMismatch, "more vector components than r");
  }
  Multivector out(r);
  for (std::size_t i = 0; i < comps.size(); ++i) {
    if (comps[i] != 0.0) out.terms_.push_back({Mask{1} << i, comps[i]});
  }
  return out;  // masks 1,2,4,... are already ascending
}

Multivector Multivector::vector(int r, std::initializer_list<double> comps) {
  return vector(r, std::span<const double>(comps.begin(), comps.size()));
}

Multivector Multivector::from_terms(int r, std::vector<Term> terms, double tol) {
  Multivector out(r, tol);
  const Mask limit = Mask{1} << r;
  std::sort(terms.begin(), terms.end(),
            [](const Term& x, const Term& y) { return x.mask < y.mask; });
  for (const Term& t : terms) {
    if (t.mask >= limit) throw Error(ErrorCode::OutOfRange, "blade mask exceeds 2^r");
    if (!out.terms_.empty() && out.terms_.back().mask == t.mask) {
      out.terms_.back().coeff += t.coeff;
    } else {
      out.terms_.push_back(t);
    }
  }
  drop_zeros(out.terms_);
  return out;
}

Multivector Multivector::from_sorted(int r, double tol, Storage terms) {
  Multivector out(r, tol);
  out.terms_ = std::move(terms);
  return out;
}

Multivector Multivector::with_tol(double tol) const {
  if (!(tol >= 0.0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be nonnegative");
  Multivector out = *this;
  out.tol_ = tol;
  return out;
}

double Multivector::coeff(Mask mask) const noexcept {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), mask,
                             [](const Term& t, Mask m) { return t.mask < m; });
  return (it != terms_.end() && it->mask == mask) ? it->coeff : 0.0;
}

double Multivector::max_abs() const noexcept {
  double m = 0.0;
  for (const Term& t : terms_) m = std::max(m, std::abs(t.coeff));
  return m;
}

double Multivector::norm() const noexcept {
  double s = 0.0;
  for (const Term& t : terms_) s += t.coeff * t.coeff;
  return std::sqrt(s);
}

bool Multivector::is_pure_grade(int k) const noexcept {
  return std::all_of(terms_.begin(), terms_.end(),
                     [k](const Term& t) { return std::popcount(t.mask) == k; });
}

double Multivector::norm_outside_grade(int k) const noexcept {
  double s = 0.0;
  for (const Term& t : terms_) {
    if (std::popcount(t.mask) != k) s += t.coeff * t.coeff;
  }
  return std::sqrt(s);
}

Multivector Multivector::pruned(double threshold) const {
  Multivector out(r_, tol_);
  for (const Term& t : terms_) {
    if (std::abs(t.coeff) > threshold) out.terms_.push_back(t);
  }
  return out;
}

void Multivector::check_same_r(const Multivector& other, const char* op) const {
  if (r_ != other.r_) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string(op) + ": r=" + std::to_string(r_) + " vs r=" + std::to_string(other.r_));
  }
}

void Multivector::combine(const Multivector& other, double sign) {
  if (other.terms_.empty()) return;
  Storage merged;
  merged.reserve(terms_.size() + other.terms_.size());
  auto a = terms_.begin();
  auto b = other.terms_.begin();
  while (a != terms_.end() || b != other.terms_.end()) {
    if (b == other.terms_.end() || (a != terms_.end() && a->mask < b->mask)) {
      merged.push_back(*a++);
    } else if (a == terms_.end() || b->mask < a->mask) {
      merged.push_back({b->mask, sign * b->coeff});
      ++b;
    } else {
      const double c = a->coeff + sign * b->coeff;
      if (c != 0.0) merged.push_back({a->mask, c});
      ++a;
      ++b;
    }
  }
  terms_ = std::move(merged);
}

Multivector& Multivector::operator+=(const Multivector& other) {
  check_same_r(other, "addition");
  combine(other, 1.0);
  return *this;
}

Multivector& Multivector::operator-=(const Multivector& other) {
  check_same_r(other, "subtraction");
  combine(other, -1.0);
  return *this;
}

Multivector& Multivector::operator*=(double s) {
  if (s == 0.0) {
    terms_.clear();
    return *this;
  }
  for (Term& t : terms_) t.coeff *= s;
  drop_zeros(terms_);
  return *this;
}

Multivector& Multivector::operator/=(double s) {
  if (s == 0.0) throw Error(ErrorCode::InvalidArgument, "division by zero");
  for (Term& t : terms_) t.coeff /= s;
  drop_zeros(terms_);
  return *this;
}

Multivector Multivector::plus_scalar(double s) const {
  return *this + Multivector::scalar(r_, s);
}

Multivector operator*(const Multivector& a, const Multivector& b) {
  a.check_same_r(b, "geometric product");
  const int r = a.r_;
  Multivector out(r, a.tol_);
  if (a.terms_.empty() || b.terms_.empty()) return out;

  if (r <= kTableDim) {
    const auto& signs = sign_table();
    const std::size_t n = std::size_t{1} << r;
    std::array<double, kTableSize> acc;
    std::fill_n(acc.begin(), n, 0.0);
    for (const Term& ta : a.terms_) {
      const std::int8_t* row = &signs[ta.mask * kTableSize];
      for (const Term& tb : b.terms_) {
        acc[ta.mask ^ tb.mask] += row[tb.mask] * (ta.coeff * tb.coeff);
      }
    }
    for (Mask m = 0; m < n; ++m) {
      if (acc[m] != 0.0) out.terms_.push_back({m, acc[m]});
    }
    return out;
  }

  if (r <= 12) {
    thread_local std::vector<double> acc(std::size_t{1} << 12, 0.0);
    thread_local std::vector<Mask> touched;
    touched.clear();
    for (const Term& ta : a.terms_) {
      for (const Term& tb : b.terms_) {
        const Mask m = ta.mask ^ tb.mask;
        if (acc[m] == 0.0) touched.push_back(m);
        acc[m] += blade_sign(ta.mask, tb.mask) * (ta.coeff * tb.coeff);
      }
    }
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
    for (Mask m : touched) {
      if (acc[m] != 0.0) out.terms_.push_back({m, acc[m]});
      acc[m] = 0.0;
    }
    return out;
  }

  std::vector<Term> prods;
  prods.reserve(a.terms_.size() * b.terms_.size());
  for (const Term& ta : a.terms_) {
    for (const Term& tb : b.terms_) {
      prods.push_back({ta.mask ^ tb.mask, blade_sign(ta.mask, tb.mask) * (ta.coeff * tb.coeff)});
    }
  }
  std::stable_sort(prods.begin(), prods.end(),
                   [](const Term& x, const Term& y) { return x.mask < y.mask; });
  for (const Term& t : prods) {
    if (!out.terms_.empty() && out.terms_.back().mask == t.mask) {
      out.terms_.back().coeff += t.coeff;
    } else {
      out.terms_.push_back(t);
    }
  }
  drop_zeros(out.terms_);
  return out;
}

Multivector geometric_product(const Multivector& a, const Multivector& b) { return a * b; }

std::string Multivector::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  os.precision(17);
  bool first = true;
  for (const Term& t : terms_) {
    if (!first) os << (t.coeff < 0 ? " - " : " + ");
    else if (t.coeff < 0) os << "-";
    first = false;
    os << std::abs(t.coeff);
    for (int i = 0; i < r_; ++i) {
      if (t.mask & (Mask{1} << i)) os << "*e" << (i + 1);
    }
  }
  return os.str();
}

AlgebraContext::AlgebraContext(int r_, double tol_, double prune_)
    : r(r_), tol(tol_), prune(prune_) {
  check_dimension(r);
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "context tol must be > 0");
  if (!(prune >= 0.0)) throw Error(ErrorCode::InvalidArgument, "context prune must be >= 0");
}

}  // namespace cliffsurf
