#include "poly.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace blockproj {

Poly::Poly(PrimeField f, std::vector<Fel> coeffs)
    : field_(f), coeffs_(std::move(coeffs)) {
    for (Fel c : coeffs_) {
        if (c >= field_.p())
            fail(ErrorCode::invalid_argument, "coefficient not reduced mod p");
    }
    trim();
}

void Poly::trim() {
    while (!coeffs_.empty() && coeffs_.back() == 0)
        coeffs_.pop_back();
}

Poly Poly::add(const Poly& g) const {
    if (!(field_ == g.field_))
        fail(ErrorCode::invalid_argument, "polynomial fields differ");
    std::vector<Fel> out(std::max(coeffs_.size(), g.coeffs_.size()), 0);
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = field_.add(coeff(i), g.coeff(i));
    return Poly(field_, std::move(out));
}

Poly Poly::sub(const Poly& g) const {
    if (!(field_ == g.field_))
        fail(ErrorCode::invalid_argument, "polynomial fields differ");
    std::vector<Fel> out(std::max(coeffs_.size(), g.coeffs_.size()), 0);
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = field_.sub(coeff(i), g.coeff(i));
    return Poly(field_, std::move(out));
}

Poly Poly::mul(const Poly& g) const {
    if (!(field_ == g.field_))
        fail(ErrorCode::invalid_argument, "polynomial fields differ");
    if (is_zero() || g.is_zero()) return zero(field_);
    std::vector<Fel> out(coeffs_.size() + g.coeffs_.size() - 1, 0);
    const std::uint64_t p = field_.p();
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (coeffs_[i] == 0) continue;
        const std::uint64_t ci = coeffs_[i];
        for (std::size_t j = 0; j < g.coeffs_.size(); ++j)
            out[i + j] = static_cast<Fel>((out[i + j] + ci * g.coeffs_[j]) % p);
    }
    return Poly(field_, std::move(out));
}

Poly Poly::scale(Fel c) const {
    std::vector<Fel> out(coeffs_.size());
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        out[i] = field_.mul(coeffs_[i], c);
    return Poly(field_, std::move(out));
}

Poly Poly::shift(std::size_t k) const {
    if (is_zero()) return *this;
    std::vector<Fel> out(coeffs_.size() + k, 0);
    std::copy(coeffs_.begin(), coeffs_.end(), out.begin() + static_cast<std::ptrdiff_t>(k));
    return Poly(field_, std::move(out));
}

std::pair<Poly, Poly> Poly::divmod(const Poly& g) const {
    if (!(field_ == g.field_))
        fail(ErrorCode::invalid_argument, "polynomial fields differ");
    if (g.is_zero())
        fail(ErrorCode::division_by_zero, "polynomial division by zero");
    if (degree() < g.degree())
        return {zero(field_), *this};
    const Fel lead_inv = field_.inv(g.leading());
    std::vector<Fel> rem = coeffs_;
    std::vector<Fel> quot(static_cast<std::size_t>(degree() - g.degree()) + 1, 0);
    for (int k = degree() - g.degree(); k >= 0; --k) {
        const std::size_t top = static_cast<std::size_t>(k + g.degree());
        const Fel q = field_.mul(rem[top], lead_inv);
        if (q == 0) continue;
        quot[static_cast<std::size_t>(k)] = q;
        for (std::size_t j = 0; j < g.coeffs_.size(); ++j) {
            const std::size_t idx = static_cast<std::size_t>(k) + j;
            rem[idx] = field_.sub(rem[idx], field_.mul(q, g.coeffs_[j]));
        }
    }
    rem.resize(static_cast<std::size_t>(std::max(g.degree(), 0)));
    return {Poly(field_, std::move(quot)), Poly(field_, std::move(rem))};
}

Poly Poly::rem(const Poly& g) const { return divmod(g).second; }

Poly Poly::monic() const {
    if (is_zero() || leading() == 1) return *this;
    return scale(field_.inv(leading()));
}

Poly Poly::pow(std::uint64_t e) const {
    Poly base = *this;
    Poly acc = one(field_);
    while (e) {
        if (e & 1) acc = acc.mul(base);
        base = base.mul(base);
        e >>= 1;
    }
    return acc;
}

Poly Poly::powmod_u64(std::uint64_t e, const Poly& m) const {
    Poly base = rem(m);
    Poly acc = one(field_).rem(m);
    while (e) {
        if (e & 1) acc = acc.mul(base).rem(m);
        base = base.mul(base).rem(m);
        e >>= 1;
    }
    return acc;
}

Poly Poly::powmod(mpz_srcptr e, const Poly& m) const {
    Poly base = rem(m);
    Poly acc = one(field_).rem(m);
    const mp_bitcnt_t bits = mpz_sizeinbase(e, 2);
    if (mpz_sgn(e) == 0) return acc;
    for (mp_bitcnt_t i = 0; i < bits; ++i) {
        if (mpz_tstbit(e, i)) acc = acc.mul(base).rem(m);
        if (i + 1 < bits) base = base.mul(base).rem(m);
    }
    return acc;
}

Fel Poly::eval(Fel x) const {
    std::uint64_t acc = 0;
    const std::uint64_t p = field_.p();
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
        acc = (acc * x + *it) % p;
    return static_cast<Fel>(acc);
}

std::string Poly::to_string() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int i = degree(); i >= 0; --i) {
        const Fel c = coeff(static_cast<std::size_t>(i));
        if (c == 0) continue;
        if (!first) os << "+";
        first = false;
        if (i == 0 || c != 1)
            os << c;
        if (i >= 1) {
            os << "x";
            if (i >= 2) os << "^" << i;
        }
    }
    return os.str();
}

std::string Poly::to_coeff_list() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (i) os << ",";
        os << coeffs_[i];
    }
    return os.str();
}

Poly gcd(const Poly& f, const Poly& g) {
    Poly a = f, b = g;
    while (!b.is_zero()) {
        Poly r = a.rem(b);
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

Poly lcm(const Poly& f, const Poly& g) {
    if (f.is_zero() || g.is_zero()) return Poly::zero(f.field());
    Poly d = gcd(f, g);
    return f.mul(g).divmod(d).first.monic();
}

bool is_irreducible(const Poly& f) {
    if (f.degree() < 1)
        fail(ErrorCode::invalid_argument, "irreducibility needs degree >= 1");
    const PrimeField field = f.field();
    const std::uint32_t d = static_cast<std::uint32_t>(f.degree());
    if (d == 1) return true;
    const Poly fm = f.monic();
    const Poly x = Poly::x(field);

    mpz_class p(static_cast<unsigned long>(field.p()));
    // x^(p^d) mod f must equal x.
    mpz_class pd;
    mpz_pow_ui(pd.get_mpz_t(), p.get_mpz_t(), d);
    if (!(x.powmod(pd.get_mpz_t(), fm) == x.rem(fm)))
        return false;
    // For each prime l | d:  gcd(x^(p^(d/l)) - x, f) must be trivial.
    std::vector<std::uint32_t> prime_factors;
    std::uint32_t rest = d;
    for (std::uint32_t l = 2; l * l <= rest; ++l) {
        if (rest % l == 0) {
            prime_factors.push_back(l);
            while (rest % l == 0) rest /= l;
        }
    }
    if (rest > 1) prime_factors.push_back(rest);
    for (std::uint32_t l : prime_factors) {
        mpz_class pe;
        mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), d / l);
        Poly frob = x.powmod(pe.get_mpz_t(), fm).sub(x.rem(fm));
        if (gcd(frob, fm).degree() != 0)
            return false;
    }
    return true;
}

namespace {

Poly poly_from_index(PrimeField field, std::uint32_t d, std::uint64_t k) {
    std::vector<Fel> coeffs(d + 1, 0);
    const std::uint64_t p = field.p();
    for (std::uint32_t j = 0; j < d; ++j) {
        coeffs[j] = static_cast<Fel>(k % p);
        k /= p;
    }
    coeffs[d] = 1;
    return Poly(field, std::move(coeffs));
}

} // namespace

std::vector<Poly> enumerate_irreducibles(PrimeField field, std::uint32_t d,
                                         std::uint64_t candidate_limit) {
    if (d < 1)
        fail(ErrorCode::invalid_argument, "degree must be >= 1");
    // p^d candidates; refuse absurd requests up front.
    double size = 1.0;
    for (std::uint32_t i = 0; i < d; ++i) size *= static_cast<double>(field.p());
    if (size > static_cast<double>(candidate_limit))
        fail(ErrorCode::limit_exceeded,
             "enumeration of p^d candidates exceeds the configured limit");
    const std::uint64_t total = static_cast<std::uint64_t>(size);
    std::vector<Poly> out;
    for (std::uint64_t k = 0; k < total; ++k) {
        Poly f = poly_from_index(field, d, k);
        if (is_irreducible(f))
            out.push_back(std::move(f));
    }
    return out;
}

Poly random_irreducible(Rng& rng, PrimeField field, std::uint32_t d) {
    if (d < 1)
        fail(ErrorCode::invalid_argument, "degree must be >= 1");
    for (;;) {
        std::vector<Fel> coeffs(d + 1, 0);
        for (std::uint32_t j = 0; j < d; ++j)
            coeffs[j] = field.sample(rng);
        coeffs[d] = 1;
        Poly f(field, std::move(coeffs));
        if (is_irreducible(f)) return f;
    }
}

namespace {

Poly parse_coeff_list(PrimeField field, const std::string& text) {
    std::vector<Fel> coeffs;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t pos = 0;
        long long v;
        try {
            v = std::stoll(item, &pos);
        } catch (const std::exception&) {
            fail(ErrorCode::parse_error, "bad coefficient '" + item + "'");
        }
        while (pos < item.size() && std::isspace(static_cast<unsigned char>(item[pos]))) ++pos;
        if (pos != item.size())
            fail(ErrorCode::parse_error, "bad coefficient '" + item + "'");
        coeffs.push_back(field.reduce(v));
    }
    if (coeffs.empty())
        fail(ErrorCode::parse_error, "empty coefficient list");
    return Poly(field, std::move(coeffs));
}

// Grammar: term ('+'|'-') term ...; term = coeff | coeff? 'x' ('^' exp)?
Poly parse_algebraic(PrimeField field, const std::string& text) {
    Poly out = Poly::zero(field);
    std::size_t i = 0;
    const auto skip_ws = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    bool first = true;
    skip_ws();
    while (i < text.size()) {
        long long sign = 1;
        skip_ws();
        if (text[i] == '+' || text[i] == '-') {
            sign = text[i] == '-' ? -1 : 1;
            ++i;
        } else if (!first) {
            fail(ErrorCode::parse_error, "expected '+' or '-' in polynomial");
        }
        first = false;
        skip_ws();
        long long coeff = 1;
        bool saw_coeff = false;
        if (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
            coeff = 0;
            while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
                coeff = coeff * 10 + (text[i] - '0');
                if (coeff > (1ll << 40))
                    fail(ErrorCode::parse_error, "coefficient literal too large");
                ++i;
            }
            saw_coeff = true;
        }
        skip_ws();
        std::uint64_t exp = 0;
        if (i < text.size() && (text[i] == 'x' || text[i] == 'X')) {
            ++i;
            exp = 1;
            skip_ws();
            if (i < text.size() && text[i] == '^') {
                ++i;
                skip_ws();
                if (i >= text.size() || !std::isdigit(static_cast<unsigned char>(text[i])))
                    fail(ErrorCode::parse_error, "expected exponent after '^'");
                exp = 0;
                while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
                    exp = exp * 10 + static_cast<std::uint64_t>(text[i] - '0');
                    if (exp > 4096)
                        fail(ErrorCode::parse_error, "exponent too large");
                    ++i;
                }
            }
        } else if (!saw_coeff) {
            fail(ErrorCode::parse_error, "expected term in polynomial");
        }
        std::vector<Fel> mono(exp + 1, 0);
        mono[exp] = field.reduce(sign * coeff);
        out = out.add(Poly(field, std::move(mono)));
        skip_ws();
    }
    if (first)
        fail(ErrorCode::parse_error, "empty polynomial");
    return out;
}

} // namespace

Poly parse_poly(PrimeField field, const std::string& text) {
    const bool algebraic = text.find('x') != std::string::npos ||
                           text.find('X') != std::string::npos;
    return algebraic ? parse_algebraic(field, text) : parse_coeff_list(field, text);
}

ScalarSequence apply_poly_to_sequence(const Poly& f, const ScalarSequence& s) {
    const PrimeField field = s.field;
    if (f.is_zero())
        return ScalarSequence(field, std::vector<Fel>(s.terms.size(), 0));
    const std::size_t d = static_cast<std::size_t>(f.degree());
    if (s.terms.size() < d + 1)
        fail(ErrorCode::sequence_too_short,
             "sequence has fewer than deg(f)+1 terms");
    const std::uint64_t p = field.p();
    std::vector<Fel> out(s.terms.size() - d, 0);
    for (std::size_t k = 0; k < out.size(); ++k) {
        std::uint64_t acc = 0;
        for (std::size_t i = 0; i <= d; ++i)
            acc = (acc + std::uint64_t{f.coeff(i)} * s.terms[i + k]) % p;
        out[k] = static_cast<Fel>(acc);
    }
    return ScalarSequence(field, std::move(out));
}

Poly berlekamp_massey(const ScalarSequence& s) {
    const PrimeField field = s.field;
    const std::vector<Fel>& seq = s.terms;
    // Connection polynomial form: C(x) = 1 + c_1 x + ... + c_L x^L with
    // s_j + sum_i c_i s_{j-i} = 0.  Reversed at the end to the monic
    // generator acting as sum_i f_i S_{i+k}.
    std::vector<Fel> C{1}, B{1};
    std::size_t L = 0, m = 1;
    Fel b = 1;
    for (std::size_t n = 0; n < seq.size(); ++n) {
        std::uint64_t d = seq[n];
        for (std::size_t i = 1; i <= L && i < C.size(); ++i)
            d = (d + std::uint64_t{C[i]} * seq[n - i]) % field.p();
        Fel disc = static_cast<Fel>(d % field.p());
        if (disc == 0) {
            ++m;
            continue;
        }
        const Fel coef = field.mul(disc, field.inv(b));
        if (2 * L <= n) {
            std::vector<Fel> T = C;
            if (C.size() < B.size() + m) C.resize(B.size() + m, 0);
            for (std::size_t i = 0; i < B.size(); ++i)
                C[i + m] = field.sub(C[i + m], field.mul(coef, B[i]));
            L = n + 1 - L;
            B = std::move(T);
            b = disc;
            m = 1;
        } else {
            if (C.size() < B.size() + m) C.resize(B.size() + m, 0);
            for (std::size_t i = 0; i < B.size(); ++i)
                C[i + m] = field.sub(C[i + m], field.mul(coef, B[i]));
            ++m;
        }
    }
    // f_j = c_{L-j}: the degree-L reversal of C.
    std::vector<Fel> f(L + 1, 0);
    for (std::size_t j = 0; j <= L; ++j)
        f[j] = L - j < C.size() ? C[L - j] : 0;
    return Poly(field, std::move(f));
}

ScalarSequence BlockSequence::entry(std::size_t i, std::size_t j) const {
    if (terms.empty())
        fail(ErrorCode::invalid_argument, "empty block sequence");
    std::vector<Fel> t(terms.size());
    for (std::size_t k = 0; k < terms.size(); ++k)
        t[k] = terms[k].at(i, j);
    return ScalarSequence(terms[0].field, std::move(t));
}

Poly minpoly_block_sequence(const BlockSequence& bs, PrimeField field) {
    if (bs.terms.empty())
        fail(ErrorCode::invalid_argument, "empty block sequence");
    Poly acc = Poly::one(field);
    const std::size_t b = bs.block_size();
    for (std::size_t i = 0; i < b; ++i)
        for (std::size_t j = 0; j < b; ++j)
            acc = lcm(acc, berlekamp_massey(bs.entry(i, j)));
    return acc.monic();
}

} // namespace blockproj
