#include "hilbert16/poly.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

namespace hilbert16 {

namespace {

constexpr int kMaxExponent = 4096;

double pow_det(double base, int n) {
    // deterministic power by binary exponentiation
    double r = 1.0, b = base;
    for (int e = n; e > 0; e >>= 1) {
        if (e & 1) r *= b;
        b *= b;
    }
    return r;
}

}  // namespace

BivariatePoly BivariatePoly::constant(double c) {
    BivariatePoly p;
    p.add_term(0, 0, c);
    return p;
}

BivariatePoly BivariatePoly::monomial(int i, int j, double c) {
    BivariatePoly p;
    p.add_term(i, j, c);
    return p;
}

bool BivariatePoly::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == Key{0, 0});
}

std::optional<int> BivariatePoly::degree() const {
    if (terms_.empty()) return std::nullopt;
    int d = 0;
    for (const auto& [key, c] : terms_) d = std::max(d, key.first + key.second);
    return d;
}

double BivariatePoly::coeff(int i, int j) const {
    auto it = terms_.find({i, j});
    return it == terms_.end() ? 0.0 : it->second;
}

void BivariatePoly::add_term(int i, int j, double c) {
    if (c == 0.0) return;
    auto [it, inserted] = terms_.try_emplace({i, j}, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0.0) terms_.erase(it);
    }
}

double BivariatePoly::eval(double x, double y) const {
    // Horner in y inside each x-power group, then Horner over x-power gaps.
    double acc = 0.0;
    auto it = terms_.rbegin();
    int prev_i = -1;
    while (it != terms_.rend()) {
        const int i = it->first.first;
        // collect the group with this x-exponent (map is ordered by (i, j);
        // reverse iteration gives descending i, descending j)
        double group = 0.0;
        int prev_j = -1;
        while (it != terms_.rend() && it->first.first == i) {
            const int j = it->first.second;
            if (prev_j < 0)
                group = it->second;
            else
                group = group * pow_det(y, prev_j - j) + it->second;
            prev_j = j;
            ++it;
        }
        if (prev_j > 0) group *= pow_det(y, prev_j);
        if (prev_i < 0)
            acc = group;
        else
            acc = acc * pow_det(x, prev_i - i) + group;
        prev_i = i;
    }
    if (prev_i > 0) acc *= pow_det(x, prev_i);
    return acc;
}

Interval BivariatePoly::eval(const Box2& box) const {
    const Interval X{box.x_lo, box.x_hi};
    const Interval Y{box.y_lo, box.y_hi};
    Interval acc(0.0);
    for (const auto& [key, c] : terms_)
        acc = acc + c * (pow_int(X, key.first) * pow_int(Y, key.second));
    return acc;
}

BivariatePoly BivariatePoly::derivative(Var v) const {
    BivariatePoly out;
    for (const auto& [key, c] : terms_) {
        const auto [i, j] = key;
        if (v == Var::X) {
            if (i > 0) out.add_term(i - 1, j, c * i);
        } else {
            if (j > 0) out.add_term(i, j - 1, c * j);
        }
    }
    return out;
}

BivariatePoly BivariatePoly::operator+(const BivariatePoly& o) const {
    BivariatePoly out = *this;
    for (const auto& [key, c] : o.terms_) out.add_term(key.first, key.second, c);
    return out;
}

BivariatePoly BivariatePoly::operator-(const BivariatePoly& o) const {
    BivariatePoly out = *this;
    for (const auto& [key, c] : o.terms_) out.add_term(key.first, key.second, -c);
    return out;
}

BivariatePoly BivariatePoly::operator*(const BivariatePoly& o) const {
    BivariatePoly out;
    for (const auto& [ka, ca] : terms_)
        for (const auto& [kb, cb] : o.terms_)
            out.add_term(ka.first + kb.first, ka.second + kb.second, ca * cb);
    return out;
}

BivariatePoly BivariatePoly::scaled(double s) const {
    BivariatePoly out;
    for (const auto& [key, c] : terms_) out.add_term(key.first, key.second, s * c);
    return out;
}

std::string BivariatePoly::to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    char buf[64];
    bool first = true;
    for (const auto& [key, c] : terms_) {
        const auto [i, j] = key;
        const double mag = std::abs(c);
        if (first) {
            if (c < 0.0) out += "-";
            first = false;
        } else {
            out += c < 0.0 ? " - " : " + ";
        }
        std::string vars;
        if (i > 0) vars += i == 1 ? "x" : "x^" + std::to_string(i);
        if (j > 0) {
            if (!vars.empty()) vars += "*";
            vars += j == 1 ? "y" : "y^" + std::to_string(j);
        }
        if (vars.empty()) {
            std::snprintf(buf, sizeof buf, "%.17g", mag);
            out += buf;
        } else if (mag == 1.0) {
            out += vars;
        } else {
            std::snprintf(buf, sizeof buf, "%.17g", mag);
            out += buf;
            out += "*";
            out += vars;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Parser: recursive descent.
//   expr   := ['+'|'-'] term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*      -- '/' divisor must be constant
//   factor := base ('^' uint)?
//   base   := 'x' | 'y' | number | '(' expr ')'
// Whitespace insignificant; implicit multiplication rejected.
// ---------------------------------------------------------------------------

namespace {

class Parser {
public:
    explicit Parser(const std::string& text) : s_(text) {}

    BivariatePoly run() {
        BivariatePoly p = expr();
        skip_ws();
        if (pos_ != s_.size())
            throw ParseError(errc::syntax_error, "unexpected character '" + charname() + "'",
                             pos_);
        return p;
    }

private:
    const std::string& s_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }
    std::string charname() const {
        return pos_ < s_.size() ? std::string(1, s_[pos_]) : std::string("<end>");
    }

    BivariatePoly expr() {
        bool neg = false;
        const char first = peek();
        if (first == '+' || first == '-') {
            neg = first == '-';
            ++pos_;
        }
        BivariatePoly acc = term();
        if (neg) acc = acc.scaled(-1.0);
        for (;;) {
            const char c = peek();
            if (c == '+') {
                ++pos_;
                acc = acc + term();
            } else if (c == '-') {
                ++pos_;
                acc = acc - term();
            } else {
                return acc;
            }
        }
    }

    BivariatePoly term() {
        BivariatePoly acc = factor();
        for (;;) {
            const char c = peek();
            if (c == '*') {
                ++pos_;
                acc = acc * factor();
            } else if (c == '/') {
                const std::size_t at = pos_;
                ++pos_;
                BivariatePoly d = factor();
                if (!d.is_constant())
                    throw ParseError(errc::syntax_error, "division by a non-constant", at);
                const double v = d.coeff(0, 0);
                if (v == 0.0) throw ParseError(errc::syntax_error, "division by zero", at);
                acc = acc.scaled(1.0 / v);
            } else {
                return acc;
            }
        }
    }

    BivariatePoly factor() {
        BivariatePoly b = base();
        if (peek() == '^') {
            ++pos_;
            skip_ws();
            const std::size_t at = pos_;
            if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_])))
                throw ParseError(errc::syntax_error, "expected integer exponent", pos_);
            long long e = 0;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                e = e * 10 + (s_[pos_] - '0');
                if (e > kMaxExponent)
                    throw ParseError(errc::exponent_overflow,
                                     "exponent exceeds " + std::to_string(kMaxExponent), at);
                ++pos_;
            }
            BivariatePoly acc = BivariatePoly::constant(1.0);
            for (long long k = 0; k < e; ++k) acc = acc * b;
            return acc;
        }
        return b;
    }

    BivariatePoly base() {
        const char c = peek();
        const std::size_t at = pos_;
        if (c == '(') {
            ++pos_;
            BivariatePoly inner = expr();
            if (peek() != ')') throw ParseError(errc::syntax_error, "expected ')'", pos_);
            ++pos_;
            return inner;
        }
        if (c == 'x') {
            ++pos_;
            reject_identifier_tail(at);
            return BivariatePoly::monomial(1, 0, 1.0);
        }
        if (c == 'y') {
            ++pos_;
            reject_identifier_tail(at);
            return BivariatePoly::monomial(0, 1, 1.0);
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number(at);
        if (std::isalpha(static_cast<unsigned char>(c)))
            throw ParseError(errc::unknown_identifier,
                             "unknown identifier '" + charname() + "' (only x, y allowed)", at);
        throw ParseError(errc::syntax_error, "expected a factor, got '" + charname() + "'", at);
    }

    void reject_identifier_tail(std::size_t at) {
        if (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) ||
                                 s_[pos_] == '.' || s_[pos_] == '_'))
            throw ParseError(errc::syntax_error, "implicit multiplication is not allowed", at);
    }

    BivariatePoly number(std::size_t at) {
        std::size_t i = pos_;
        while (i < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i]))) ++i;
        if (i < s_.size() && s_[i] == '.') {
            ++i;
            while (i < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i]))) ++i;
        }
        if (i < s_.size() && (s_[i] == 'e' || s_[i] == 'E')) {
            std::size_t j = i + 1;
            if (j < s_.size() && (s_[j] == '+' || s_[j] == '-')) ++j;
            if (j < s_.size() && std::isdigit(static_cast<unsigned char>(s_[j]))) {
                ++j;
                while (j < s_.size() && std::isdigit(static_cast<unsigned char>(s_[j]))) ++j;
                i = j;
            }
        }
        const std::string tok = s_.substr(pos_, i - pos_);
        if (tok.empty() || tok == ".")
            throw ParseError(errc::syntax_error, "malformed number", at);
        char* end = nullptr;
        const double v = std::strtod(tok.c_str(), &end);
        if (end != tok.c_str() + tok.size())
            throw ParseError(errc::syntax_error, "malformed number '" + tok + "'", at);
        pos_ = i;
        // "2x" must fail rather than multiply implicitly
        if (pos_ < s_.size() && (std::isalpha(static_cast<unsigned char>(s_[pos_])) ||
                                 s_[pos_] == '('))
            throw ParseError(errc::syntax_error, "implicit multiplication is not allowed", pos_);
        return BivariatePoly::constant(v);
    }
};

}  // namespace

BivariatePoly parse_poly(const std::string& text) { return Parser(text).run(); }

PlanarSystem::PlanarSystem(BivariatePoly p, BivariatePoly q) : P(std::move(p)), Q(std::move(q)) {
    if (P.is_zero() && Q.is_zero())
        throw Error(errc::degenerate_system, "P and Q must not both be zero");
    const int dp = P.degree().value_or(0);
    const int dq = Q.degree().value_or(0);
    degree = std::max(dp, dq);
}

BivariatePoly divergence(const PlanarSystem& sys) {
    return sys.P.derivative(Var::X) + sys.Q.derivative(Var::Y);
}

std::pair<BivariatePoly, BivariatePoly> contact_system(const PlanarSystem& sys) {
    const BivariatePoly pxx = sys.P.derivative(Var::X).derivative(Var::X);
    const BivariatePoly qyx = sys.Q.derivative(Var::Y).derivative(Var::X);
    const BivariatePoly pxy = sys.P.derivative(Var::X).derivative(Var::Y);
    const BivariatePoly qyy = sys.Q.derivative(Var::Y).derivative(Var::Y);
    BivariatePoly first = sys.P * (pxx + qyx) + sys.Q * (pxy + qyy);
    return {std::move(first), divergence(sys)};
}

PlanarSystem perturb(const PlanarSystem& sys, double delta, std::uint64_t seed) {
    if (delta < 0.0) throw Error(errc::usage, "perturb requires delta >= 0");
    if (delta == 0.0) return sys;
    std::mt19937_64 rng(seed);
    auto draw = [&rng, delta]() {
        const double u = (rng() >> 11) * 0x1.0p-53;  // [0, 1)
        return delta * (2.0 * u - 1.0);
    };
    const int n = sys.degree;
    auto jiggle = [&](const BivariatePoly& p) {
        BivariatePoly out = p;
        for (int i = 0; i <= n; ++i)
            for (int j = 0; j + i <= n; ++j) out.add_term(i, j, draw());
        return out;
    };
    BivariatePoly p2 = jiggle(sys.P);
    BivariatePoly q2 = jiggle(sys.Q);
    return PlanarSystem(std::move(p2), std::move(q2));
}

const char* errc_name(errc c) {
    switch (c) {
        case errc::syntax_error: return "SyntaxError";
        case errc::unknown_identifier: return "UnknownIdentifier";
        case errc::exponent_overflow: return "ExponentOverflow";
        case errc::identically_zero: return "IdenticallyZero";
        case errc::degenerate_divergence: return "DegenerateDivergence";
        case errc::degenerate_system: return "DegenerateSystem";
        case errc::not_generic: return "NotGeneric";
        case errc::solver_inconclusive: return "SolverInconclusive";
        case errc::invalid_degree: return "InvalidDegree";
        case errc::wrong_degree: return "WrongDegree";
        case errc::non_integer: return "NonInteger";
        case errc::winding_broken: return "WindingBroken";
        case errc::irregular_path: return "IrregularPath";
        case errc::non_finite: return "NonFinite";
        case errc::not_critical: return "NotCritical";
        case errc::unassigned_contact: return "UnassignedContact";
        case errc::blowup: return "Blowup";
        case errc::no_return: return "NoReturn";
        case errc::not_converged: return "NotConverged";
        case errc::non_isolated: return "NonIsolated";
        case errc::usage: return "Usage";
    }
    return "Error";
}

int errc_exit_code(errc c) {
    switch (c) {
        case errc::usage:
        case errc::invalid_degree:
        case errc::wrong_degree:
        case errc::syntax_error:
        case errc::unknown_identifier:
        case errc::exponent_overflow:
            return 2;
        case errc::solver_inconclusive:
        case errc::non_finite:
        case errc::not_converged:
        case errc::no_return:
        case errc::non_isolated:
        case errc::winding_broken:
        case errc::blowup:
        case errc::non_integer:
            return 3;
        default:
            return 1;
    }
}

}  // namespace hilbert16
