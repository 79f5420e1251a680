#pragma once

// Multivariate polynomials over Q used as p-integral ideal generators, the
// p-adic distance of a point to their zero set (the maximum of |f(x)|_p
// over the generators), Gauss norms, and bounded ideal membership by exact
// row reduction.

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "singmod/core/arith.hpp"
#include "singmod/core/errors.hpp"
#include "singmod/padic/number.hpp"
#include "singmod/padic/polynomial.hpp"

namespace singmod {

/// Raised when f is not in the span of the generators at the degree cap;
/// this does not prove that f is outside the ideal.
class not_in_ideal_at_cap : public error {
  public:
    using error::error;
};

/// A p-adic absolute value p^(-ord), kept as its exact valuation.
struct PadicAbs {
    u64 p = 2;
    ExtValuation ord = ExtValuation::infinity();

    static PadicAbs zero(u64 p) { return {p, ExtValuation::infinity()}; }
    static PadicAbs of_valuation(u64 p, mpq_class v) { return {p, {false, v}}; }

    bool is_zero() const { return ord.infinite; }
    double value() const { return ord.infinite ? 0.0 : std::pow(static_cast<double>(p), -ord.value.get_d()); }
    std::string to_string() const {
        if (ord.infinite) return "0";
        if (ord.value == 0) return "1";
        return std::to_string(p) + "^" + singmod::to_string(mpq_class(-ord.value));
    }

    friend PadicAbs operator*(PadicAbs const & a, PadicAbs const & b) {
        if (a.ord.infinite || b.ord.infinite) return zero(a.p);
        return of_valuation(a.p, a.ord.value + b.ord.value);
    }
    friend bool operator==(PadicAbs const & a, PadicAbs const & b) { return a.ord == b.ord; }
    friend bool operator<(PadicAbs const & a, PadicAbs const & b) {
        if (b.ord.infinite) return false;
        if (a.ord.infinite) return true;
        return a.ord.value > b.ord.value;
    }
    friend bool operator<=(PadicAbs const & a, PadicAbs const & b) { return !(b < a); }
};

inline PadicAbs max(PadicAbs const & a, PadicAbs const & b) { return a < b ? b : a; }
inline PadicAbs min(PadicAbs const & a, PadicAbs const & b) { return a < b ? a : b; }

inline PadicAbs padic_abs(mpq_class const & q, u64 p) {
    if (q == 0) return PadicAbs::zero(p);
    return PadicAbs::of_valuation(p, mpq_class(valuation(mpz_class(q.get_num()), p) - valuation(mpz_class(q.get_den()), p)));
}

using Monomial = std::vector<int>;

/// Polynomial in a fixed number of variables with rational coefficients.
class MPoly {
  public:
    MPoly() = default;
    explicit MPoly(int nvars) : n_(nvars) {}

    static MPoly constant(int nvars, mpq_class const & c) {
        MPoly r(nvars);
        if (c != 0) r.t_[Monomial(nvars, 0)] = c;
        return r;
    }
    static MPoly variable(int nvars, int i) {
        MPoly r(nvars);
        Monomial m(nvars, 0);
        m[i] = 1;
        r.t_[m] = 1;
        return r;
    }
    static MPoly term(Monomial m, mpq_class const & c) {
        MPoly r(static_cast<int>(m.size()));
        if (c != 0) r.t_[std::move(m)] = c;
        return r;
    }

    int nvars() const { return n_; }
    bool is_zero() const { return t_.empty(); }
    std::map<Monomial, mpq_class> const & terms() const { return t_; }
    mpq_class coeff(Monomial const & m) const {
        auto const it = t_.find(m);
        return it == t_.end() ? mpq_class(0) : it->second;
    }

    int total_degree() const {
        int d = -1;
        for (auto const & [m, c] : t_) {
            int s = 0;
            for (int e : m) s += e;
            d = std::max(d, s);
        }
        return d;
    }

    friend MPoly operator+(MPoly a, MPoly const & b) {
        a.check(b);
        for (auto const & [m, c] : b.t_) a.add(m, c);
        return a;
    }
    friend MPoly operator-(MPoly a, MPoly const & b) {
        a.check(b);
        for (auto const & [m, c] : b.t_) a.add(m, -c);
        return a;
    }
    friend MPoly operator*(MPoly const & a, MPoly const & b) {
        a.check(b);
        MPoly r(a.n_);
        for (auto const & [ma, ca] : a.t_) {
            for (auto const & [mb, cb] : b.t_) {
                Monomial m(a.n_);
                for (int i = 0; i < a.n_; ++i) m[i] = ma[i] + mb[i];
                r.add(m, ca * cb);
            }
        }
        return r;
    }
    friend bool operator==(MPoly const & a, MPoly const & b) { return a.n_ == b.n_ && a.t_ == b.t_; }

    mpq_class eval(std::vector<mpq_class> const & x) const {
        if (static_cast<int>(x.size()) != n_) throw domain_error("point has the wrong number of coordinates");
        mpq_class r = 0;
        for (auto const & [m, c] : t_) {
            mpq_class t = c;
            for (int i = 0; i < n_; ++i) {
                for (int e = 0; e < m[i]; ++e) t *= x[i];
            }
            r += t;
        }
        return r;
    }

    PadicNumber eval(std::vector<PadicNumber> const & x, long coefficient_precision) const {
        if (static_cast<int>(x.size()) != n_) throw domain_error("point has the wrong number of coordinates");
        if (n_ == 0) throw domain_error("evaluation needs at least one variable");
        PadicNumber r = PadicNumber::zero(x[0].ring());
        for (auto const & [m, c] : t_) {
            PadicNumber t = PadicNumber::from_rational(c, x[0].ring(), coefficient_precision);
            for (int i = 0; i < n_; ++i) {
                if (m[i] > 0) t = t * x[i].pow(m[i]);
            }
            r = r + t;
        }
        return r;
    }

    /// The same polynomial in `total` variables, its variables placed at
    /// positions offset, offset + 1, ...
    MPoly lifted(int total, int offset) const {
        MPoly r(total);
        for (auto const & [m, c] : t_) {
            Monomial mm(total, 0);
            for (int i = 0; i < n_; ++i) mm[offset + i] = m[i];
            r.t_[mm] = c;
        }
        return r;
    }

    std::string to_string() const {
        if (t_.empty()) return "0";
        std::string s;
        for (auto const & [m, c] : t_) {
            if (!s.empty()) s += " + ";
            s += "(" + singmod::to_string(c) + ")";
            for (int i = 0; i < n_; ++i) {
                if (m[i] > 0) s += "*X" + std::to_string(i + 1) + (m[i] > 1 ? "^" + std::to_string(m[i]) : "");
            }
        }
        return s;
    }

  private:
    void check(MPoly const & o) const {
        if (n_ != o.n_) throw domain_error("polynomials in different numbers of variables");
    }
    void add(Monomial const & m, mpq_class const & c) {
        auto & v = t_[m];
        v += c;
        if (v == 0) t_.erase(m);
    }

    int n_ = 0;
    std::map<Monomial, mpq_class> t_;
};

/// max of the coefficients' |.|_p.
inline PadicAbs gauss_norm(MPoly const & f, u64 p) {
    PadicAbs r = PadicAbs::zero(p);
    for (auto const & [m, c] : f.terms()) r = max(r, padic_abs(c, p));
    return r;
}

inline PadicAbs gauss_norm(PadicPolynomial const & f) {
    u64 const p = f.prime();
    PadicAbs r = PadicAbs::zero(p);
    for (auto const & c : f.coefficients()) {
        if (c.is_exact_zero()) continue;
        if (c.is_unresolved_zero()) throw precision_exhausted("coefficient indistinguishable from zero");
        r = max(r, PadicAbs::of_valuation(p, c.valuation()));
    }
    return r;
}

/// Generator set of an ideal, all generators p-integral.
struct IdealPresentation {
    int nvars = 0;
    std::vector<MPoly> generators;
};

inline void check_integral(IdealPresentation const & ideal, u64 p) {
    for (auto const & g : ideal.generators) {
        if (g.nvars() != ideal.nvars) throw domain_error("generator in the wrong number of variables");
        if (PadicAbs::of_valuation(p, 0) < gauss_norm(g, p)) throw domain_error("generator is not p-integral");
    }
}

/// max_f |f(x)|_p over the generators, for a point with rational
/// p-integral coordinates; evaluation is exact.
inline PadicAbs distance(std::vector<mpq_class> const & x, IdealPresentation const & ideal, u64 p) {
    check_integral(ideal, p);
    for (auto const & c : x) {
        if (c != 0 && padic_abs(c, p).ord.value < 0) throw domain_error("point is not p-integral");
    }
    PadicAbs r = PadicAbs::zero(p);
    for (auto const & g : ideal.generators) r = max(r, padic_abs(g.eval(x), p));
    return r;
}

/// The same for a point with p-adic coordinates. A generator value that
/// cancels to zero at finite precision only bounds |f(x)|_p from above;
/// the maximum is still decided when another generator exceeds that bound.
inline PadicAbs distance(std::vector<PadicNumber> const & x, IdealPresentation const & ideal) {
    if (x.empty()) throw domain_error("empty point");
    u64 const p = x[0].prime();
    check_integral(ideal, p);
    long prec = 0;
    for (auto const & c : x) {
        if (!c.is_exact_zero()) prec = std::max(prec, c.absolute_precision());
        if (c.ord_lower_bound() < 0) throw domain_error("point is not p-integral");
    }
    PadicAbs decided = PadicAbs::zero(p);
    std::optional<long> undecided;  // smallest precision bound among unresolved zeros
    for (auto const & g : ideal.generators) {
        PadicNumber const v = g.eval(x, prec + 8);
        if (v.is_exact_zero()) continue;
        if (v.is_unresolved_zero()) {
            undecided = undecided ? std::min(*undecided, v.absolute_precision()) : v.absolute_precision();
            continue;
        }
        decided = max(decided, PadicAbs::of_valuation(p, v.valuation()));
    }
    if (undecided && !(PadicAbs::of_valuation(p, *undecided) < decided)) {
        throw precision_exhausted("a generator vanishes to precision " + std::to_string(*undecided) +
                                  " and no other generator decides the distance");
    }
    return decided;
}

/// min over the samples y_k of Z of max_i |x_i - y_k,i|_p: an upper bound
/// for the distance to Z measured through points.
inline PadicAbs distance_prime_upper(std::vector<mpq_class> const & x, std::vector<std::vector<mpq_class>> const & samples,
                                     u64 p) {
    if (samples.empty()) throw domain_error("distance_prime_upper needs at least one sample point");
    std::optional<PadicAbs> best;
    for (auto const & y : samples) {
        if (y.size() != x.size()) throw domain_error("sample point has the wrong number of coordinates");
        PadicAbs m = PadicAbs::zero(p);
        for (std::size_t i = 0; i < x.size(); ++i) m = max(m, padic_abs(x[i] - y[i], p));
        best = best ? min(*best, m) : m;
    }
    return *best;
}

/// As above, additionally asserting distance(x, I) <= the result when the
/// samples lie on the zero set of I.
inline PadicAbs distance_prime_upper(std::vector<mpq_class> const & x, std::vector<std::vector<mpq_class>> const & samples,
                                     IdealPresentation const & ideal, u64 p) {
    for (auto const & y : samples) {
        for (auto const & g : ideal.generators) {
            if (g.eval(y) != 0) throw domain_error("sample point is not on the zero set");
        }
    }
    PadicAbs const upper = distance_prime_upper(x, samples, p);
    PadicAbs const d = distance(x, ideal, p);
    if (upper < d) throw error("distance exceeds distance_prime_upper");
    return upper;
}

struct MembershipResult {
    std::vector<MPoly> a;  // f = sum a_i f_i
    PadicAbs c;            // max |a_i|_p <= c |f|_p
    PadicAbs f_norm;
    PadicAbs a_norm;       // max_i |a_i|_p
};

namespace detail {

inline std::vector<Monomial> monomials_up_to(int nvars, int degree) {
    std::vector<Monomial> out;
    if (degree < 0) return out;
    Monomial m(nvars, 0);
    // Enumerate exponent vectors with sum <= degree in lexicographic order.
    std::function<void(int, int)> rec = [&](int i, int left) {
        if (i == nvars) {
            out.push_back(m);
            return;
        }
        for (int e = 0; e <= left; ++e) {
            m[i] = e;
            rec(i + 1, left - e);
        }
        m[i] = 0;
    };
    rec(0, degree);
    return out;
}

}  // namespace detail

/// Writes f = sum a_i f_i with deg(a_i f_i) <= cap. The coefficient matrix
/// of the products m * f_i is row reduced together with an identity block
/// that records the transformation E; the solution read off the pivots is
/// E f on the pivot rows, so c = max |E_rk|_p over pivot rows r bounds
/// max |a_i|_p by c |f|_p. Pivots are chosen of maximal p-adic absolute value.
inline MembershipResult ideal_membership_bounded(MPoly const & f, std::vector<MPoly> const & gens, int cap, u64 p) {
    if (gens.empty()) throw domain_error("no generators");
    int const n = f.nvars();
    for (auto const & g : gens) {
        if (g.nvars() != n) throw domain_error("generator in the wrong number of variables");
    }
    if (f.total_degree() > cap) throw not_in_ideal_at_cap("deg f exceeds the cap");
    std::vector<Monomial> const rows = detail::monomials_up_to(n, cap);
    std::map<Monomial, std::size_t> row_index;
    for (std::size_t i = 0; i < rows.size(); ++i) row_index[rows[i]] = i;
    // Columns: (generator, multiplier monomial).
    std::vector<std::pair<std::size_t, Monomial>> cols;
    for (std::size_t gi = 0; gi < gens.size(); ++gi) {
        if (gens[gi].is_zero()) continue;
        for (auto const & m : detail::monomials_up_to(n, cap - gens[gi].total_degree())) cols.emplace_back(gi, m);
    }
    std::size_t const R = rows.size(), C = cols.size();
    // Augmented [F | I].
    std::vector<std::vector<mpq_class>> a(R, std::vector<mpq_class>(C + R, 0));
    for (std::size_t j = 0; j < C; ++j) {
        MPoly const prod = gens[cols[j].first] * MPoly::term(cols[j].second, 1);
        for (auto const & [m, c] : prod.terms()) a[row_index.at(m)][j] = c;
    }
    for (std::size_t i = 0; i < R; ++i) a[i][C + i] = 1;
    std::vector<std::size_t> pivot_col;
    std::size_t r = 0;
    for (std::size_t j = 0; j < C && r < R; ++j) {
        std::optional<std::size_t> best;
        for (std::size_t i = r; i < R; ++i) {
            if (a[i][j] == 0) continue;
            if (!best || padic_abs(a[*best][j], p) < padic_abs(a[i][j], p)) best = i;
        }
        if (!best) continue;
        std::swap(a[r], a[*best]);
        mpq_class const inv = 1 / a[r][j];
        for (auto & v : a[r]) v *= inv;
        for (std::size_t i = 0; i < R; ++i) {
            if (i == r || a[i][j] == 0) continue;
            mpq_class const t = a[i][j];
            for (std::size_t k = j; k < C + R; ++k) a[i][k] -= t * a[r][k];
        }
        pivot_col.push_back(j);
        ++r;
    }
    std::vector<mpq_class> fv(R, 0);
    for (auto const & [m, c] : f.terms()) fv[row_index.at(m)] = c;
    auto ef = [&](std::size_t i) {
        mpq_class s = 0;
        for (std::size_t k = 0; k < R; ++k) {
            if (a[i][C + k] != 0 && fv[k] != 0) s += a[i][C + k] * fv[k];
        }
        return s;
    };
    for (std::size_t i = r; i < R; ++i) {
        if (ef(i) != 0) throw not_in_ideal_at_cap("f is not in the span at degree cap " + std::to_string(cap));
    }
    MembershipResult out;
    out.a.assign(gens.size(), MPoly(n));
    out.c = PadicAbs::zero(p);
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t k = 0; k < R; ++k) out.c = max(out.c, padic_abs(a[i][C + k], p));
        mpq_class const x = ef(i);
        auto const & [gi, m] = cols[pivot_col[i]];
        out.a[gi] = out.a[gi] + MPoly::term(m, x);
    }
    out.f_norm = gauss_norm(f, p);
    out.a_norm = PadicAbs::zero(p);
    for (auto const & ai : out.a) out.a_norm = max(out.a_norm, gauss_norm(ai, p));
    return out;
}

enum class DistanceMode { union_of_sets, product_of_sets };

struct UnionProductReport {
    bool holds = false;
    PadicAbs dist_z, dist_z2, dist_combined;
    PadicAbs c;  // constant in the upper bound (generator distances need c = 1)
    std::vector<std::string> failed;
};

/// Union: generators of Z u Z' are the pairwise products; checks
/// d(Z) d(Z') <= d(Z u Z') <= min(d(Z), d(Z')).
/// Product: generators of Z x Z' are both sets lifted to n + m variables;
/// checks max(d(x, Z), d(y, Z')) <= d((x, y), Z x Z') <= c max(...).
inline UnionProductReport check_union_product_distances(std::vector<mpq_class> const & x, std::vector<mpq_class> const & y,
                                                        IdealPresentation const & z, IdealPresentation const & z2,
                                                        DistanceMode mode, u64 p) {
    UnionProductReport rep;
    rep.c = PadicAbs::of_valuation(p, 0);
    auto expect = [&](bool ok, std::string const & what) {
        if (!ok) rep.failed.push_back(what);
    };
    if (mode == DistanceMode::union_of_sets) {
        if (z.nvars != z2.nvars) throw domain_error("union needs equal numbers of variables");
        IdealPresentation u{z.nvars, {}};
        for (auto const & f : z.generators) {
            for (auto const & g : z2.generators) u.generators.push_back(f * g);
        }
        rep.dist_z = distance(x, z, p);
        rep.dist_z2 = distance(x, z2, p);
        rep.dist_combined = distance(x, u, p);
        expect(rep.dist_z * rep.dist_z2 <= rep.dist_combined, "d(Z) d(Z') <= d(Z u Z')");
        expect(rep.dist_combined <= min(rep.dist_z, rep.dist_z2), "d(Z u Z') <= min");
        expect(rep.dist_combined <= PadicAbs::of_valuation(p, 0), "d <= 1");
    } else {
        int const total = z.nvars + z2.nvars;
        IdealPresentation prod{total, {}};
        for (auto const & f : z.generators) prod.generators.push_back(f.lifted(total, 0));
        for (auto const & g : z2.generators) prod.generators.push_back(g.lifted(total, z.nvars));
        std::vector<mpq_class> xy = x;
        xy.insert(xy.end(), y.begin(), y.end());
        rep.dist_z = distance(x, z, p);
        rep.dist_z2 = distance(y, z2, p);
        rep.dist_combined = distance(xy, prod, p);
        PadicAbs const m = max(rep.dist_z, rep.dist_z2);
        expect(m <= rep.dist_combined, "max <= d(Z x Z')");
        expect(rep.dist_combined <= rep.c * m, "d(Z x Z') <= c max");
    }
    rep.holds = rep.failed.empty();
    return rep;
}

}  // namespace singmod
