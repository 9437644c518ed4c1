#include "resodet/symbolic.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace resodet {

namespace {

using Key = std::pair<int, std::vector<int>>;

Key key_of(const SymbolicTerm& t) {
    std::vector<int> d = t.v_derivs;
    std::sort(d.begin(), d.end(), std::greater<int>());
    return {t.z_power, d};
}

DifferentialPolynomial from_map(std::map<Key, Rational>&& m) {
    DifferentialPolynomial p;
    for (auto& [k, c] : m) {
        if (c == 0) continue;
        p.terms.push_back(SymbolicTerm{c, k.first, k.second});
    }
    return p;
}

std::map<Key, Rational> to_map(const DifferentialPolynomial& p) {
    std::map<Key, Rational> m;
    for (const SymbolicTerm& t : p.terms) m[key_of(t)] += t.coeff;
    return m;
}

}  // namespace

DifferentialPolynomial DifferentialPolynomial::one() { return z_power(0); }

DifferentialPolynomial DifferentialPolynomial::z_power(int n) {
    DifferentialPolynomial p;
    p.terms.push_back(SymbolicTerm{Rational(1), n, {}});
    return p;
}

DifferentialPolynomial DifferentialPolynomial::canonicalized() const {
    auto m = to_map(*this);
    return from_map(std::move(m));
}

DifferentialPolynomial DifferentialPolynomial::operator+(const DifferentialPolynomial& o) const {
    auto m = to_map(*this);
    for (const SymbolicTerm& t : o.terms) m[key_of(t)] += t.coeff;
    return from_map(std::move(m));
}

DifferentialPolynomial DifferentialPolynomial::operator*(const Rational& c) const {
    DifferentialPolynomial p = *this;
    for (SymbolicTerm& t : p.terms) t.coeff *= c;
    return p.canonicalized();
}

DifferentialPolynomial DifferentialPolynomial::d_dy() const {
    std::map<Key, Rational> m;
    for (const SymbolicTerm& t : terms) {
        if (t.z_power > 0) {
            SymbolicTerm s = t;
            s.z_power -= 1;
            m[key_of(s)] += t.coeff * Rational(-t.z_power);
        }
        for (size_t i = 0; i < t.v_derivs.size(); ++i) {
            SymbolicTerm s = t;
            s.v_derivs[i] += 1;
            m[key_of(s)] += t.coeff;
        }
    }
    return from_map(std::move(m));
}

DifferentialPolynomial DifferentialPolynomial::apply_hamiltonian() const {
    DifferentialPolynomial dd = d_dy().d_dy() * Rational(-1);
    std::map<Key, Rational> m = to_map(dd);
    for (const SymbolicTerm& t : terms) {
        SymbolicTerm s = t;
        s.v_derivs.push_back(0);
        m[key_of(s)] += t.coeff;
    }
    return from_map(std::move(m));
}

DifferentialPolynomial DifferentialPolynomial::at_coincidence() const {
    DifferentialPolynomial p;
    for (const SymbolicTerm& t : terms)
        if (t.z_power == 0) p.terms.push_back(t);
    return p.canonicalized();
}

std::string DifferentialPolynomial::str() const {
    std::ostringstream os;
    bool first = true;
    for (const SymbolicTerm& t : terms) {
        if (!first) os << " + ";
        first = false;
        os << "(" << t.coeff << ")";
        if (t.z_power) os << " z^" << t.z_power;
        for (int m : t.v_derivs) {
            os << " V";
            if (m) os << "^(" << m << ")";
        }
    }
    if (first) os << "0";
    return os.str();
}

Rational hp_binomial(int j, int k, int d) {
    Rational r(1);
    for (int i = 1; i <= j - 1 - k; ++i) {
        r *= Rational(2 * k + d + 2 * i, 2);  // k + d/2 + i
        r /= Rational(i);
    }
    return r;
}

DifferentialPolynomial hp_density(int j) {
    if (j < 1) throw std::invalid_argument("hp_density: j >= 1");
    DifferentialPolynomial total;
    Rational factorial_kj(1);
    for (int i = 2; i <= j; ++i) factorial_kj *= i;  // (k+j)! running value, k = 0
    Rational pow4(1), factorial_k(1);
    for (int k = 0; k < j; ++k) {
        if (k > 0) {
            pow4 *= 4;
            factorial_k *= k;
            factorial_kj *= (k + j);
        }
        DifferentialPolynomial p = DifferentialPolynomial::z_power(2 * k);
        for (int it = 0; it < k + j; ++it) p = p.apply_hamiltonian();
        Rational w = hp_binomial(j, k, 1) / (pow4 * factorial_k * factorial_kj);
        if (j % 2 == 1) w = -w;
        total = total + p.at_coincidence() * w;
    }
    return total;
}

DifferentialPolynomial ibp_reduce(const DifferentialPolynomial& p) {
    std::map<std::vector<int>, Rational> work, done;
    for (const SymbolicTerm& t : p.canonicalized().terms) {
        if (t.z_power != 0) throw std::invalid_argument("ibp_reduce: evaluate at z=0 first");
        std::vector<int> d = t.v_derivs;
        std::sort(d.begin(), d.end(), std::greater<int>());
        work[d] += t.coeff;
    }
    int guard = 0;
    while (!work.empty()) {
        if (++guard > 200000) throw std::runtime_error("ibp_reduce: no termination");
        auto it = work.begin();
        std::vector<int> d = it->first;
        Rational c = it->second;
        work.erase(it);
        if (c == 0) continue;
        if (d.empty()) {
            done[d] += c;
            continue;
        }
        if (d.size() == 1) {
            if (d[0] == 0) done[d] += c;  // plain V; pure derivatives integrate to zero
            continue;
        }
        int mx = d[0];
        if (mx == 0 || d[1] == mx) {
            done[d] += c;
            continue;
        }
        // int V^(mx) * rest = -int V^(mx-1) * (rest)'
        std::vector<int> rest(d.begin() + 1, d.end());
        for (size_t i = 0; i < rest.size(); ++i) {
            std::vector<int> nd = rest;
            nd[i] += 1;
            nd.push_back(mx - 1);
            std::sort(nd.begin(), nd.end(), std::greater<int>());
            work[nd] -= c;
        }
    }
    DifferentialPolynomial out;
    for (auto& [d, c] : done) {
        if (c == 0) continue;
        out.terms.push_back(SymbolicTerm{c, 0, d});
    }
    return out.canonicalized();
}

}  // namespace resodet
