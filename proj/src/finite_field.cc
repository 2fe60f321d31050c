#include "fpclab/finite_field.h"

#include <algorithm>
#include <string>

#include "fpclab/error.h"
#include "fpclab/kernels.h"

namespace fpclab {
namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (exp != 0) {
    if (exp & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

}  // namespace

bool is_prime(std::uint64_t n) noexcept {
  if (n < 2) return false;
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // These twelve bases are a deterministic witness set below 3.3 * 10^24.
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

FieldContext FieldContext::create(std::uint64_t q) {
  if (q < 5) throw Error(ErrorKind::kModulusTooSmall, "q = " + std::to_string(q));
  if (q >= (std::uint64_t{1} << 63)) throw Error(ErrorKind::kInvalidParameter, "q must be below 2^63");
  if (!is_prime(q)) throw Error(ErrorKind::kNonPrimeModulus, "q = " + std::to_string(q));
  return FieldContext(q);
}

std::uint64_t FieldContext::mul(std::uint64_t a, std::uint64_t b) const noexcept {
  if (q_ == kMersenne61) return kernels::Mersenne61{}.mul(a, b);
  return mulmod(a, b, q_);
}

std::uint64_t FieldContext::pow(std::uint64_t base, std::uint64_t exp) const noexcept {
  std::uint64_t result = 1;
  while (exp != 0) {
    if (exp & 1) result = mul(result, base);
    base = mul(base, base);
    exp >>= 1;
  }
  return result;
}

std::uint64_t FieldContext::inv(std::uint64_t a) const {
  if (a % q_ == 0) throw Error(ErrorKind::kDivisionByZero, "inverse of zero");
  return pow(a % q_, q_ - 2);
}

FieldElement FieldContext::element(std::uint64_t value) const { return FieldElement(value % q_, *this); }
FieldElement FieldContext::zero() const { return element(0); }
FieldElement FieldContext::one() const { return element(1); }
FieldElement FieldContext::random(RandomStream& rng) const { return element(rng.uniform_below(q_)); }

FieldElement::FieldElement(std::uint64_t value, const FieldContext& ctx)
    : value_(value % ctx.modulus()), modulus_(ctx.modulus()) {}

FieldContext FieldElement::context() const { return FieldContext::create(modulus_); }

void FieldElement::check_same(const FieldElement& o) const {
  if (o.modulus_ != modulus_) {
    throw Error(ErrorKind::kFieldMismatch,
                "F_" + std::to_string(modulus_) + " vs F_" + std::to_string(o.modulus_));
  }
}

FieldElement FieldElement::operator+(const FieldElement& o) const {
  check_same(o);
  std::uint64_t s = value_ + o.value_;
  return {s >= modulus_ ? s - modulus_ : s, modulus_};
}

FieldElement FieldElement::operator-(const FieldElement& o) const {
  check_same(o);
  return {value_ >= o.value_ ? value_ - o.value_ : value_ + modulus_ - o.value_, modulus_};
}

FieldElement FieldElement::operator*(const FieldElement& o) const {
  check_same(o);
  return {mulmod(value_, o.value_, modulus_), modulus_};
}

FieldElement FieldElement::operator-() const { return {value_ == 0 ? 0 : modulus_ - value_, modulus_}; }

FieldElement FieldElement::inverse() const {
  if (value_ == 0) throw Error(ErrorKind::kDivisionByZero, "inverse of zero");
  return {powmod(value_, modulus_ - 2, modulus_), modulus_};
}

FieldElement FieldElement::operator/(const FieldElement& o) const {
  check_same(o);
  return *this * o.inverse();
}

Polynomial::Polynomial(const FieldContext& ctx, std::vector<std::uint64_t> coefficients)
    : modulus_(ctx.modulus()), coeffs_(std::move(coefficients)) {
  if (coeffs_.empty()) coeffs_.push_back(0);
  for (auto& c : coeffs_) c %= modulus_;
}

FieldElement Polynomial::coefficient(std::size_t i) const {
  return FieldContext::create(modulus_).element(i < coeffs_.size() ? coeffs_[i] : 0);
}

Polynomial interpolate(std::span<const FieldPoint> points, std::size_t degree_bound) {
  if (points.size() != degree_bound + 1) {
    throw Error(ErrorKind::kArityMismatch, std::to_string(points.size()) + " points for degree bound " +
                                               std::to_string(degree_bound));
  }
  const std::uint64_t q = points.front().first.modulus();
  std::vector<std::uint64_t> xs;
  std::vector<std::uint64_t> ys;
  xs.reserve(points.size());
  ys.reserve(points.size());
  for (const auto& [x, y] : points) {
    if (x.modulus() != q || y.modulus() != q) throw Error(ErrorKind::kFieldMismatch, "interpolate");
    xs.push_back(x.value());
    ys.push_back(y.value());
  }
  std::vector<std::uint64_t> sorted = xs;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error(ErrorKind::kDuplicatePoint, "repeated x-coordinate");
  }
  const FieldContext ctx = FieldContext::create(q);
  return Polynomial(ctx, interpolate_residues(ctx, xs, ys));
}

FieldElement evaluate(const Polynomial& p, const FieldElement& x) {
  if (x.modulus() != p.modulus()) throw Error(ErrorKind::kFieldMismatch, "evaluate");
  const FieldContext ctx = FieldContext::create(p.modulus());
  std::uint64_t acc = 0;
  const auto coeffs = p.coefficients();
  for (std::size_t i = coeffs.size(); i-- > 0;) acc = ctx.add(ctx.mul(acc, x.value()), coeffs[i]);
  return ctx.element(acc);
}

std::uint64_t DistinctSampler::next(RandomStream& rng) {
  if (seen_.size() >= ctx_.modulus()) throw Error(ErrorKind::kFieldExhausted, "every element already drawn");
  for (;;) {
    std::uint64_t v = rng.uniform_below(ctx_.modulus());
    if (seen_.insert(v).second) return v;
  }
}

std::vector<FieldElement> sample_distinct(const FieldContext& ctx, std::size_t k, RandomStream& rng) {
  if (k > ctx.modulus()) {
    throw Error(ErrorKind::kFieldExhausted,
                std::to_string(k) + " distinct elements from F_" + std::to_string(ctx.modulus()));
  }
  DistinctSampler sampler(ctx);
  std::vector<FieldElement> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) out.push_back(ctx.element(sampler.next(rng)));
  return out;
}

std::vector<std::uint64_t> interpolate_residues(const FieldContext& ctx, std::span<const std::uint64_t> xs,
                                                std::span<const std::uint64_t> ys) {
  std::vector<std::uint64_t> coeffs(xs.size());
  kernels::interpolate(ctx.modulus(), xs, ys, coeffs);
  return coeffs;
}

std::vector<std::uint64_t> evaluate_residues(const FieldContext& ctx, std::span<const std::uint64_t> coeffs,
                                             std::span<const std::uint64_t> xs) {
  std::vector<std::uint64_t> out(xs.size());
  kernels::evaluate_many(ctx.modulus(), coeffs, xs, out);
  return out;
}

}  // namespace fpclab
