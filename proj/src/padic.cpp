#include "jph/padic.hpp"

#include <algorithm>
#include <deque>
#include <mutex>
#include <shared_mutex>
#include <tuple>
#include <unordered_map>

namespace jph {

namespace {

std::shared_mutex power_mutex;
std::unordered_map<std::uint64_t, std::deque<mpz_class>> power_cache;

void reduce_into(mpz_class& r, const mpz_class& m) {
    mpz_mod(r.get_mpz_t(), r.get_mpz_t(), m.get_mpz_t());
}

void require_same_prime(const PadicInt& a, const PadicInt& b) {
    if (a.prime() != b.prime())
        throw UsageError("p-adic operands have different primes: " + std::to_string(a.prime()) +
                         " and " + std::to_string(b.prime()));
}

}  // namespace

const mpz_class& prime_power(std::uint64_t p, int s) {
    if (s < 0) throw UsageError("negative exponent in prime_power");
    const auto index = static_cast<std::size_t>(s);
    {
        std::shared_lock lock(power_mutex);
        auto it = power_cache.find(p);
        if (it != power_cache.end() && it->second.size() > index) return it->second[index];
    }
    std::unique_lock lock(power_mutex);
    auto& powers = power_cache[p];
    if (powers.empty()) powers.emplace_back(1);
    while (powers.size() <= index) {
        mpz_class next = powers.back();
        mpz_mul_ui(next.get_mpz_t(), next.get_mpz_t(), p);
        powers.push_back(std::move(next));
    }
    return powers[index];
}

PadicInt::PadicInt(std::uint64_t prime, int precision, const mpz_class& residue)
    : prime_(prime), precision_(precision), residue_(residue) {
    if (prime < 2) throw UsageError("p-adic prime must be at least 2");
    if (precision < 1) throw UsageError("p-adic precision must be at least 1");
    reduce_into(residue_, prime_power(prime_, precision_));
}

PadicInt::PadicInt(std::uint64_t prime, int precision, long value)
    : PadicInt(prime, precision, mpz_class(value)) {}

PadicInt PadicInt::reduced(int precision) const {
    if (precision > precision_)
        throw PrecisionExhausted("cannot raise precision from " + std::to_string(precision_) +
                                 " to " + std::to_string(precision));
    if (precision == precision_) return *this;
    return {prime_, precision, residue_};
}

PadicInt PadicInt::operator-() const {
    if (residue_ == 0) return *this;
    return {Trusted{}, prime_, precision_, modulus() - residue_};
}

PadicInt operator+(const PadicInt& a, const PadicInt& b) {
    require_same_prime(a, b);
    const int s = std::min(a.precision_, b.precision_);
    mpz_class r = a.residue_ + b.residue_;
    reduce_into(r, prime_power(a.prime_, s));
    return {PadicInt::Trusted{}, a.prime_, s, std::move(r)};
}

PadicInt operator-(const PadicInt& a, const PadicInt& b) {
    require_same_prime(a, b);
    const int s = std::min(a.precision_, b.precision_);
    mpz_class r = a.residue_ - b.residue_;
    reduce_into(r, prime_power(a.prime_, s));
    return {PadicInt::Trusted{}, a.prime_, s, std::move(r)};
}

PadicInt operator*(const PadicInt& a, const PadicInt& b) {
    require_same_prime(a, b);
    const int s = std::min(a.precision_, b.precision_);
    mpz_class r = a.residue_ * b.residue_;
    reduce_into(r, prime_power(a.prime_, s));
    return {PadicInt::Trusted{}, a.prime_, s, std::move(r)};
}

std::uint64_t inverse_mod_prime(std::uint64_t a, std::uint64_t p) {
    std::int64_t r0 = static_cast<std::int64_t>(p);
    std::int64_t r1 = static_cast<std::int64_t>(a % p);
    if (r1 == 0) throw NonUnit("residue " + std::to_string(a) + " is not invertible mod " + std::to_string(p));
    std::int64_t t0 = 0, t1 = 1;
    while (r1 != 0) {
        const std::int64_t q = r0 / r1;
        std::tie(r0, r1) = std::pair{r1, r0 - q * r1};
        std::tie(t0, t1) = std::pair{t1, t0 - q * t1};
    }
    if (t0 < 0) t0 += static_cast<std::int64_t>(p);
    return static_cast<std::uint64_t>(t0);
}

namespace raw {

mpz_class inverse(const mpz_class& a, std::uint64_t p, int s) {
    const std::uint64_t a0 = mpz_fdiv_ui(a.get_mpz_t(), p);
    if (a0 == 0) throw NonUnit("cannot invert a multiple of " + std::to_string(p));
    mpz_class x = inverse_mod_prime(a0, p);

    // Each Newton step x <- x(2 - a x) doubles the number of correct digits.
    std::vector<int> targets;
    for (int t = s; t > 1; t = (t + 1) / 2) targets.push_back(t);
    mpz_class at, ax;
    for (auto it = targets.rbegin(); it != targets.rend(); ++it) {
        const mpz_class& m = prime_power(p, *it);
        mpz_mod(at.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
        ax = at * x;
        ax = 2 - ax;
        x *= ax;
        reduce_into(x, m);
    }
    return x;
}

void batch_inverse(std::span<mpz_class> values, std::uint64_t p, int s) {
    if (values.empty()) return;
    for (std::size_t i = 0; i < values.size(); ++i)
        if (mpz_divisible_ui_p(values[i].get_mpz_t(), p))
            throw NonUnit("element " + std::to_string(i) + " of batch is not a unit", i);

    const mpz_class& m = prime_power(p, s);
    std::vector<mpz_class> prefix(values.size());
    prefix[0] = values[0];
    reduce_into(prefix[0], m);
    for (std::size_t i = 1; i < values.size(); ++i) {
        prefix[i] = prefix[i - 1] * values[i];
        reduce_into(prefix[i], m);
    }
    mpz_class acc = inverse(prefix.back(), p, s);
    for (std::size_t i = values.size() - 1; i > 0; --i) {
        mpz_class inv = acc * prefix[i - 1];
        reduce_into(inv, m);
        acc *= values[i];
        reduce_into(acc, m);
        values[i] = std::move(inv);
    }
    values[0] = std::move(acc);
}

int valuation(const mpz_class& x, std::uint64_t p) {
    if (x == 0) throw UsageError("valuation of zero is unbounded");
    int count = 0;
    mpz_class q = x;
    while (mpz_divisible_ui_p(q.get_mpz_t(), p)) {
        mpz_divexact_ui(q.get_mpz_t(), q.get_mpz_t(), p);
        ++count;
    }
    return count;
}

}  // namespace raw

PadicInt inv_unit(const PadicInt& a) {
    if (!a.is_unit())
        throw NonUnit("residue divisible by " + std::to_string(a.prime()) + " has no inverse");
    return {PadicInt::Trusted{}, a.prime(), a.precision(), raw::inverse(a.residue(), a.prime(), a.precision())};
}

PadicInt div_exact_p(const PadicInt& a, int t) {
    if (t < 1) throw UsageError("div_exact_p needs a positive exponent");
    if (t >= a.precision())
        throw PrecisionExhausted("dividing by p^" + std::to_string(t) + " leaves no digits at precision " +
                                 std::to_string(a.precision()));
    const mpz_class& pt = prime_power(a.prime(), t);
    if (!mpz_divisible_p(a.residue().get_mpz_t(), pt.get_mpz_t()))
        throw NotDivisible("residue is not divisible by " + std::to_string(a.prime()) + "^" + std::to_string(t));
    mpz_class q;
    mpz_divexact(q.get_mpz_t(), a.residue().get_mpz_t(), pt.get_mpz_t());
    return {PadicInt::Trusted{}, a.prime(), a.precision() - t, std::move(q)};
}

PadicInt mul_p_power(const PadicInt& a, int t) {
    if (t < 0) throw UsageError("mul_p_power needs a nonnegative exponent");
    return {PadicInt::Trusted{}, a.prime(), a.precision() + t, a.residue() * prime_power(a.prime(), t)};
}

Valuation valuation(const PadicInt& a) {
    if (a.is_zero()) return {a.precision(), true};
    return {raw::valuation(a.residue(), a.prime()), false};
}

std::vector<PadicInt> batch_inverse(std::span<const PadicInt> values) {
    if (values.empty()) return {};
    const std::uint64_t p = values.front().prime();
    const int s = values.front().precision();
    std::vector<mpz_class> work;
    work.reserve(values.size());
    for (const auto& v : values) {
        if (v.prime() != p || v.precision() != s)
            throw UsageError("batch_inverse needs a common prime and precision");
        work.push_back(v.residue());
    }
    raw::batch_inverse(work, p, s);
    std::vector<PadicInt> out;
    out.reserve(work.size());
    for (auto& w : work) out.push_back(PadicInt{PadicInt::Trusted{}, p, s, std::move(w)});
    return out;
}

std::string to_hex(const mpz_class& x) {
    if (x < 0) throw UsageError("to_hex expects a nonnegative integer");
    return x.get_str(16);
}

mpz_class from_hex(std::string_view text) {
    if (text.empty()) throw UsageError("empty hex string");
    if (text.size() > 1 && text.front() == '0') throw UsageError("hex string has a leading zero");
    for (char c : text)
        if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f')))
            throw UsageError("invalid hex digit in '" + std::string(text) + "'");
    return mpz_class(std::string(text), 16);
}

std::string serialize(const PadicInt& a) {
    return std::to_string(a.prime()) + ' ' + std::to_string(a.precision()) + ' ' + to_hex(a.residue());
}

PadicInt deserialize_padic(std::string_view text) {
    std::vector<std::string_view> fields;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t next = std::min(text.find(' ', pos), text.size());
        fields.push_back(text.substr(pos, next - pos));
        pos = next + 1;
    }
    if (fields.size() != 3) throw UsageError("p-adic record needs 3 fields");
    std::uint64_t prime = 0;
    int precision = 0;
    try {
        std::size_t used = 0;
        prime = std::stoull(std::string(fields[0]), &used);
        if (used != fields[0].size()) throw UsageError("bad prime");
        precision = std::stoi(std::string(fields[1]), &used);
        if (used != fields[1].size()) throw UsageError("bad precision");
    } catch (const std::logic_error&) {
        throw UsageError("malformed p-adic record '" + std::string(text) + "'");
    }
    mpz_class residue = from_hex(fields[2]);
    if (prime < 2 || precision < 1 || residue >= prime_power(prime, precision))
        throw UsageError("p-adic record out of range '" + std::string(text) + "'");
    return {prime, precision, residue};
}

}  // namespace jph
