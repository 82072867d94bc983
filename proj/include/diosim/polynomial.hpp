#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace diosim {

using BigInt = boost::multiprecision::cpp_int;

/// Non-negative integer tuple (n_0,...,n_{K-1}); the search domain of every
/// equation handled here. Coordinates fit machine integers by construction
/// (they come from finite boxes and occupation cutoffs); values computed from
/// them never do, hence BigInt everywhere else.
using LatticePoint = std::vector<std::int64_t>;

/// Guard rails for polynomial construction. The underlying arithmetic is
/// exact, so these only bound memory and runtime, not correctness.
struct PolynomialLimits {
    int max_vars = 8;
    int max_total_degree = 16;
    std::size_t max_terms = 100000;
};

/// Parse failure carrying the byte offset into the input text.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : std::runtime_error("parse error at byte " + std::to_string(offset) + ": " + what),
          offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

struct Monomial {
    BigInt coeff;
    std::vector<int> exponents;

    bool operator==(const Monomial&) const = default;
};

namespace detail {

inline int exponent_sum(const std::vector<int>& e) {
    return std::accumulate(e.begin(), e.end(), 0);
}

// Canonical term order: graded-lexicographic, highest total degree first,
// ties broken by lexicographically larger exponent vector first.
inline bool monomial_precedes(const std::vector<int>& a, const std::vector<int>& b) {
    const int da = exponent_sum(a);
    const int db = exponent_sum(b);
    if (da != db) return da > db;
    return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

inline BigInt int_pow(const BigInt& base, int exp) {
    BigInt acc = 1;
    BigInt b = base;
    int e = exp;
    while (e > 0) {
        if (e & 1) acc *= b;
        b *= b;
        e >>= 1;
    }
    return acc;
}

// Binomial row C(n,0..n), exact.
inline std::vector<BigInt> binomial_row(int n) {
    std::vector<BigInt> row(static_cast<std::size_t>(n) + 1);
    row[0] = 1;
    for (int j = 1; j <= n; ++j) row[j] = row[j - 1] * (n - j + 1) / j;
    return row;
}

}  // namespace detail

/// Exact multivariate integer polynomial over variables x0..x{K-1},
/// stored as a canonical sparse term list: no zero coefficients, no
/// duplicate exponent vectors, terms sorted in graded-lex order.
/// Immutable after construction.
class DiophantinePolynomial {
public:
    DiophantinePolynomial(int num_vars, std::vector<Monomial> terms, PolynomialLimits limits = {})
        : num_vars_(num_vars), limits_(limits) {
        if (num_vars < 1) throw std::invalid_argument("polynomial needs at least one variable");
        if (num_vars > limits.max_vars)
            throw std::domain_error("number of variables " + std::to_string(num_vars) +
                                    " exceeds limit " + std::to_string(limits.max_vars));
        std::map<std::vector<int>, BigInt> merged;
        for (auto& t : terms) {
            if (t.exponents.size() != static_cast<std::size_t>(num_vars))
                throw std::invalid_argument("exponent vector length does not match num_vars");
            for (int e : t.exponents)
                if (e < 0) throw std::invalid_argument("negative exponent");
            if (detail::exponent_sum(t.exponents) > limits.max_total_degree)
                throw std::domain_error("total degree exceeds limit " +
                                        std::to_string(limits.max_total_degree));
            merged[std::move(t.exponents)] += t.coeff;
        }
        for (auto& [exps, coeff] : merged)
            if (coeff != 0) terms_.push_back(Monomial{coeff, exps});
        if (terms_.size() > limits.max_terms)
            throw std::length_error("term count " + std::to_string(terms_.size()) +
                                    " exceeds limit " + std::to_string(limits.max_terms));
        std::sort(terms_.begin(), terms_.end(), [](const Monomial& a, const Monomial& b) {
            return detail::monomial_precedes(a.exponents, b.exponents);
        });
    }

    static DiophantinePolynomial zero(int num_vars, PolynomialLimits limits = {}) {
        return DiophantinePolynomial(num_vars, {}, limits);
    }

    static DiophantinePolynomial parse(std::string_view text, PolynomialLimits limits = {});

    int num_vars() const noexcept { return num_vars_; }
    const std::vector<Monomial>& terms() const noexcept { return terms_; }
    const PolynomialLimits& limits() const noexcept { return limits_; }
    bool is_zero() const noexcept { return terms_.empty(); }

    int total_degree() const noexcept {
        // canonical order puts the highest-degree term first
        return terms_.empty() ? 0 : detail::exponent_sum(terms_.front().exponents);
    }

    int degree_in(int var) const {
        check_var(var);
        int d = 0;
        for (const auto& t : terms_) d = std::max(d, t.exponents[var]);
        return d;
    }

    BigInt evaluate(const std::vector<BigInt>& point) const {
        if (point.size() != static_cast<std::size_t>(num_vars_))
            throw std::invalid_argument("evaluation point has dimension " +
                                        std::to_string(point.size()) + ", expected " +
                                        std::to_string(num_vars_));
        BigInt total = 0;
        for (const auto& t : terms_) {
            BigInt prod = t.coeff;
            for (int v = 0; v < num_vars_; ++v)
                if (t.exponents[v] != 0) prod *= detail::int_pow(point[v], t.exponents[v]);
            total += prod;
        }
        return total;
    }

    BigInt evaluate(const LatticePoint& point) const {
        std::vector<BigInt> big(point.begin(), point.end());
        return evaluate(big);
    }

    DiophantinePolynomial multiply(const DiophantinePolynomial& rhs) const {
        if (rhs.num_vars_ != num_vars_)
            throw std::invalid_argument("operand variable counts differ");
        std::map<std::vector<int>, BigInt> acc;
        for (const auto& a : terms_) {
            for (const auto& b : rhs.terms_) {
                std::vector<int> e(static_cast<std::size_t>(num_vars_));
                for (int v = 0; v < num_vars_; ++v) e[v] = a.exponents[v] + b.exponents[v];
                acc[std::move(e)] += a.coeff * b.coeff;
                if (acc.size() > limits_.max_terms)
                    throw std::length_error("product term count exceeds limit");
            }
        }
        return from_map(num_vars_, acc, limits_);
    }

    DiophantinePolynomial square() const { return multiply(*this); }

    /// Q(x) = P(x with x_var := x_var + offset), exact binomial re-expansion.
    DiophantinePolynomial shift(int var, const BigInt& offset) const {
        check_var(var);
        if (offset < 0) throw std::invalid_argument("shift offset must be non-negative");
        std::map<std::vector<int>, BigInt> acc;
        for (const auto& t : terms_) {
            const int e = t.exponents[var];
            const auto binom = detail::binomial_row(e);
            BigInt offset_pow = 1;  // offset^(e-j), built from j=e downward
            for (int j = e; j >= 0; --j) {
                std::vector<int> exps = t.exponents;
                exps[var] = j;
                acc[std::move(exps)] += t.coeff * binom[j] * offset_pow;
                if (j > 0) offset_pow *= offset;
            }
        }
        return from_map(num_vars_, acc, limits_);
    }

    /// Partial evaluation at x_var = value; variables above var shift down one slot.
    DiophantinePolynomial substitute(int var, const BigInt& value) const {
        check_var(var);
        if (value < 0) throw std::invalid_argument("substituted value must be non-negative");
        const int new_vars = std::max(1, num_vars_ - 1);
        std::map<std::vector<int>, BigInt> acc;
        for (const auto& t : terms_) {
            std::vector<int> exps;
            exps.reserve(static_cast<std::size_t>(new_vars));
            for (int v = 0; v < num_vars_; ++v)
                if (v != var) exps.push_back(t.exponents[v]);
            if (exps.empty()) exps.push_back(0);
            acc[std::move(exps)] += t.coeff * detail::int_pow(value, t.exponents[var]);
        }
        return from_map(new_vars, acc, limits_);
    }

    /// Canonical printer; parse(to_string()) reproduces the identical term list.
    std::string to_string() const {
        std::ostringstream out;
        // the header is only needed when trailing variables never appear
        int highest_used = -1;
        for (const auto& t : terms_)
            for (int v = 0; v < num_vars_; ++v)
                if (t.exponents[v] > 0) highest_used = std::max(highest_used, v);
        if (num_vars_ > 1 && highest_used + 1 < num_vars_) out << "vars=" << num_vars_ << "\n";
        if (terms_.empty()) {
            out << "0";
            return out.str();
        }
        bool first = true;
        for (const auto& t : terms_) {
            const bool negative = t.coeff < 0;
            BigInt mag = negative ? BigInt(-t.coeff) : t.coeff;
            if (first) {
                if (negative) out << "-";
                first = false;
            } else {
                out << (negative ? " - " : " + ");
            }
            const bool constant_term = detail::exponent_sum(t.exponents) == 0;
            bool printed = false;
            if (mag != 1 || constant_term) {
                out << mag.str();
                printed = true;
            }
            for (int v = 0; v < num_vars_; ++v) {
                const int e = t.exponents[v];
                if (e == 0) continue;
                if (printed) out << "*";
                out << "x" << v;
                if (e > 1) out << "^" << e;
                printed = true;
            }
        }
        return out.str();
    }

    bool operator==(const DiophantinePolynomial& rhs) const {
        return num_vars_ == rhs.num_vars_ && terms_ == rhs.terms_;
    }

private:
    void check_var(int var) const {
        if (var < 0 || var >= num_vars_)
            throw std::out_of_range("variable index " + std::to_string(var) + " out of range [0," +
                                    std::to_string(num_vars_) + ")");
    }

    static DiophantinePolynomial from_map(int num_vars,
                                          const std::map<std::vector<int>, BigInt>& acc,
                                          PolynomialLimits limits) {
        std::vector<Monomial> terms;
        terms.reserve(acc.size());
        for (const auto& [exps, coeff] : acc)
            if (coeff != 0) terms.push_back(Monomial{coeff, exps});
        return DiophantinePolynomial(num_vars, std::move(terms), limits);
    }

    int num_vars_;
    std::vector<Monomial> terms_;
    PolynomialLimits limits_;
};

namespace detail {

// Recursive-descent parser for the polynomial grammar:
//   input  := [ 'vars' '=' INT ] poly
//   poly   := ['+'|'-'] term (('+'|'-') term)*
//   term   := factor ('*' factor)*
//   factor := atom ['^' INT]
//   atom   := INT | 'x' INT | '(' poly ')'
// Whitespace is insignificant between tokens. Exponentiation of parenthesized
// groups is accepted so that squared forms like (x0 + x1)^2 parse directly.
class PolynomialParser {
public:
    PolynomialParser(std::string_view text, PolynomialLimits limits)
        : text_(text), limits_(limits) {}

    DiophantinePolynomial run() {
        parse_header();
        TermMap result = parse_poly();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected trailing input", pos_);

        int vars = declared_vars_ ? *declared_vars_ : std::max(1, max_var_seen_ + 1);
        std::vector<Monomial> terms;
        for (const auto& [exps, coeff] : result) {
            if (coeff == 0) continue;
            std::vector<int> trimmed(exps.begin(), exps.begin() + vars);
            terms.push_back(Monomial{coeff, std::move(trimmed)});
        }
        try {
            return DiophantinePolynomial(vars, std::move(terms), limits_);
        } catch (const std::exception& e) {
            throw ParseError(e.what(), text_.size());
        }
    }

private:
    // exponent keys are padded to max_vars while parsing, trimmed at the end
    using TermMap = std::map<std::vector<int>, BigInt>;

    void skip_ws() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' ||
                                       text_[pos_] == '\n' || text_[pos_] == '\r'))
            ++pos_;
    }

    bool at(char c) const { return pos_ < text_.size() && text_[pos_] == c; }

    [[noreturn]] void fail(const std::string& what, std::size_t offset) const {
        throw ParseError(what, offset);
    }

    void parse_header() {
        skip_ws();
        if (text_.compare(pos_, 4, "vars") != 0) return;
        pos_ += 4;
        skip_ws();
        if (!at('=')) fail("expected '=' after 'vars'", pos_);
        ++pos_;
        skip_ws();
        const std::size_t off = pos_;
        BigInt k = parse_integer_literal();
        if (k < 1 || k > limits_.max_vars)
            fail("declared vars=" + k.str() + " outside [1," +
                     std::to_string(limits_.max_vars) + "]",
                 off);
        declared_vars_ = static_cast<int>(k);
    }

    BigInt parse_integer_literal() {
        skip_ws();
        const std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (pos_ == start) fail("expected integer", start);
        return BigInt(std::string(text_.substr(start, pos_ - start)));
    }

    int parse_exponent() {
        skip_ws();
        bool negative = false;
        const std::size_t off = pos_;
        if (at('-')) {
            negative = true;
            ++pos_;
        }
        BigInt e = parse_integer_literal();
        if (negative) fail("negative exponent", off);
        if (e > limits_.max_total_degree)
            fail("exponent " + e.str() + " exceeds degree limit " +
                     std::to_string(limits_.max_total_degree),
                 off);
        return static_cast<int>(e);
    }

    TermMap parse_poly() {
        skip_ws();
        bool negate = false;
        if (at('+') || at('-')) {
            negate = at('-');
            ++pos_;
        }
        TermMap acc = parse_term();
        if (negate)
            for (auto& [e, c] : acc) c = -c;
        while (true) {
            skip_ws();
            if (!at('+') && !at('-')) break;
            const bool minus = at('-');
            ++pos_;
            TermMap next = parse_term();
            for (auto& [e, c] : next) {
                if (minus) c = -c;
                acc[e] += c;
            }
        }
        return acc;
    }

    TermMap parse_term() {
        TermMap acc = parse_factor();
        while (true) {
            skip_ws();
            if (!at('*')) break;
            const std::size_t off = pos_;
            ++pos_;
            acc = multiply(acc, parse_factor(), off);
        }
        return acc;
    }

    TermMap parse_factor() {
        skip_ws();
        const std::size_t off = pos_;
        TermMap base = parse_atom();
        skip_ws();
        if (at('^')) {
            ++pos_;
            const int e = parse_exponent();
            TermMap acc;
            acc[zero_key()] = 1;
            for (int i = 0; i < e; ++i) acc = multiply(acc, base, off);
            return acc;
        }
        return base;
    }

    TermMap parse_atom() {
        skip_ws();
        if (pos_ >= text_.size()) fail("expected factor, found end of input", pos_);
        const char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            TermMap m;
            m[zero_key()] = parse_integer_literal();
            return m;
        }
        if (c == 'x') {
            const std::size_t off = pos_;
            ++pos_;
            if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
                fail("expected variable index after 'x'", pos_);
            BigInt idx = parse_integer_literal();
            if (idx >= limits_.max_vars)
                fail("variable x" + idx.str() + " exceeds max vars " +
                         std::to_string(limits_.max_vars),
                     off);
            const int var = static_cast<int>(idx);
            if (declared_vars_ && var >= *declared_vars_)
                fail("variable x" + idx.str() + " exceeds declared vars=" +
                         std::to_string(*declared_vars_),
                     off);
            max_var_seen_ = std::max(max_var_seen_, var);
            std::vector<int> key = zero_key();
            key[var] = 1;
            TermMap m;
            m[std::move(key)] = 1;
            return m;
        }
        if (c == '(') {
            ++pos_;
            TermMap inner = parse_poly();
            skip_ws();
            if (!at(')')) fail("expected ')'", pos_);
            ++pos_;
            return inner;
        }
        fail(std::string("unexpected character '") + c + "'", pos_);
    }

    TermMap multiply(const TermMap& a, const TermMap& b, std::size_t offset) const {
        TermMap out;
        for (const auto& [ea, ca] : a) {
            for (const auto& [eb, cb] : b) {
                std::vector<int> e(ea.size());
                int total = 0;
                for (std::size_t v = 0; v < e.size(); ++v) {
                    e[v] = ea[v] + eb[v];
                    total += e[v];
                }
                if (total > limits_.max_total_degree)
                    fail("total degree exceeds limit " +
                             std::to_string(limits_.max_total_degree),
                         offset);
                out[std::move(e)] += ca * cb;
                if (out.size() > limits_.max_terms)
                    fail("term count exceeds limit " + std::to_string(limits_.max_terms), offset);
            }
        }
        return out;
    }

    std::vector<int> zero_key() const {
        return std::vector<int>(static_cast<std::size_t>(limits_.max_vars), 0);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    PolynomialLimits limits_;
    std::optional<int> declared_vars_;
    int max_var_seen_ = -1;
};

}  // namespace detail

inline DiophantinePolynomial DiophantinePolynomial::parse(std::string_view text,
                                                          PolynomialLimits limits) {
    return detail::PolynomialParser(text, limits).run();
}

/// Free-function spelling of the parser entry point.
inline DiophantinePolynomial parse_polynomial(std::string_view text, PolynomialLimits limits = {}) {
    return DiophantinePolynomial::parse(text, limits);
}

}  // namespace diosim
