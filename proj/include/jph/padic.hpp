#pragma once

/// Fixed-precision p-adic integers.
///
/// A PadicInt is a residue modulo p^s together with its precision s. It
/// stands for a p-adic integer known up to O(p^s). Precision belongs to the
/// value, so values of different precision can be mixed: the result of any
/// binary operation carries the smaller of the two precisions.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace jph {

/// Operands with different primes, bad precision, malformed input.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Inversion of a residue divisible by p.
class NonUnit : public std::domain_error {
public:
    explicit NonUnit(const std::string& what, std::size_t index = 0)
        : std::domain_error(what), index_(index) {}
    /// Position of the offending element for batch operations.
    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

class NotDivisible : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Not enough p-adic digits left to carry out the operation.
class PrecisionExhausted : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// p^s, cached per prime. The reference stays valid for the process lifetime.
const mpz_class& prime_power(std::uint64_t p, int s);

struct Valuation {
    int value = 0;
    /// Residue is zero: the true valuation is >= value and unknown.
    bool saturated = false;

    friend bool operator==(const Valuation&, const Valuation&) = default;
};

class PadicInt {
public:
    /// Reduces `residue` (any sign) into [0, p^precision).
    PadicInt(std::uint64_t prime, int precision, const mpz_class& residue);
    PadicInt(std::uint64_t prime, int precision, long value);

    static PadicInt zero(std::uint64_t prime, int precision) { return {prime, precision, 0L}; }
    static PadicInt one(std::uint64_t prime, int precision) { return {prime, precision, 1L}; }

    std::uint64_t prime() const noexcept { return prime_; }
    int precision() const noexcept { return precision_; }
    const mpz_class& residue() const noexcept { return residue_; }
    const mpz_class& modulus() const { return prime_power(prime_, precision_); }

    bool is_zero() const { return residue_ == 0; }
    bool is_unit() const { return mpz_divisible_ui_p(residue_.get_mpz_t(), prime_) == 0; }
    /// residue mod p
    std::uint64_t digit0() const { return mpz_fdiv_ui(residue_.get_mpz_t(), prime_); }

    /// Same value known to fewer digits. `precision` must not exceed the current one.
    PadicInt reduced(int precision) const;

    PadicInt operator-() const;
    friend PadicInt operator+(const PadicInt& a, const PadicInt& b);
    friend PadicInt operator-(const PadicInt& a, const PadicInt& b);
    friend PadicInt operator*(const PadicInt& a, const PadicInt& b);

    friend bool operator==(const PadicInt& a, const PadicInt& b) {
        return a.prime_ == b.prime_ && a.precision_ == b.precision_ && a.residue_ == b.residue_;
    }

private:
    struct Trusted {};
    PadicInt(Trusted, std::uint64_t prime, int precision, mpz_class residue)
        : prime_(prime), precision_(precision), residue_(std::move(residue)) {}

    friend PadicInt inv_unit(const PadicInt&);
    friend PadicInt div_exact_p(const PadicInt&, int);
    friend PadicInt mul_p_power(const PadicInt&, int);
    friend std::vector<PadicInt> batch_inverse(std::span<const PadicInt>);

    std::uint64_t prime_;
    int precision_;
    mpz_class residue_;
};

inline PadicInt add(const PadicInt& a, const PadicInt& b) { return a + b; }
inline PadicInt mul(const PadicInt& a, const PadicInt& b) { return a * b; }

/// Inverse of a unit, by inversion mod p followed by Newton lifting.
PadicInt inv_unit(const PadicInt& a);

/// a / p^t for a divisible by p^t; the result has precision s - t.
PadicInt div_exact_p(const PadicInt& a, int t);

/// p^t * a. Multiplying by p^t makes t more digits known, so precision grows to s + t.
PadicInt mul_p_power(const PadicInt& a, int t);

Valuation valuation(const PadicInt& a);

/// Elementwise inverse with one inversion and 3(n-1) multiplications.
std::vector<PadicInt> batch_inverse(std::span<const PadicInt> values);

/// Raw kernels on residues modulo p^s, used by the hot loops.
namespace raw {

/// Inverse of a unit `a` modulo p^s.
mpz_class inverse(const mpz_class& a, std::uint64_t p, int s);

/// In-place inversion of units modulo p^s. Throws NonUnit with the index of
/// the first non-unit.
void batch_inverse(std::span<mpz_class> values, std::uint64_t p, int s);

/// Number of times p divides x (x != 0).
int valuation(const mpz_class& x, std::uint64_t p);

}  // namespace raw

/// Inverse of a mod p (p prime, a not divisible by p).
std::uint64_t inverse_mod_prime(std::uint64_t a, std::uint64_t p);

/// Lowercase hexadecimal without prefix; "0" for zero.
std::string to_hex(const mpz_class& x);
/// Strict parse of `to_hex` output. Throws UsageError.
mpz_class from_hex(std::string_view text);

/// "prime precision hex"
std::string serialize(const PadicInt& a);
PadicInt deserialize_padic(std::string_view text);

}  // namespace jph
