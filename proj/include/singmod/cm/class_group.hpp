#pragma once

// Imaginary quadratic discriminants and the form class group: reduced
// primitive positive definite forms under Gaussian composition.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <tuple>
#include <vector>

#include "singmod/core/arith.hpp"
#include "singmod/core/errors.hpp"

namespace singmod {

struct Discriminant {
    long long value = 0;        // d < 0
    long long fundamental = 0;  // discriminant of the maximal order
    long long conductor = 1;    // d = conductor^2 * fundamental

    bool is_fundamental() const { return conductor == 1; }
};

inline Discriminant make_discriminant(long long d) {
    if (d >= 0) throw domain_error("discriminant must be negative");
    long long const r = ((d % 4) + 4) % 4;
    if (r != 0 && r != 1) throw domain_error("discriminant must be 0 or 1 mod 4: " + std::to_string(d));
    Discriminant out;
    out.value = d;
    long long d0 = d;
    long long f = 1;
    for (auto const & [ell, e] : factorize(static_cast<u64>(-d))) {
        long long const l = static_cast<long long>(ell);
        for (int i = 0; i + 1 < e; i += 2) {
            long long const t = d0 / (l * l);
            long long const tr = ((t % 4) + 4) % 4;
            if (d0 % (l * l) != 0 || (tr != 0 && tr != 1)) break;
            d0 = t;
            f *= l;
        }
    }
    out.fundamental = d0;
    out.conductor = f;
    return out;
}

inline bool is_fundamental_discriminant(long long d) {
    long long const r = ((d % 4) + 4) % 4;
    if (d >= 0 || (r != 0 && r != 1)) return false;
    return make_discriminant(d).is_fundamental();
}

/// Binary quadratic form a x^2 + b x y + c y^2.
struct QuadraticForm {
    long long a = 1, b = 0, c = 0;

    long long discriminant() const { return b * b - 4 * a * c; }

    bool is_reduced() const {
        if (!(std::llabs(b) <= a && a <= c)) return false;
        if ((std::llabs(b) == a || a == c) && b < 0) return false;
        return true;
    }

    long long eval(long long x, long long y) const { return a * x * x + b * x * y + c * y * y; }

    friend bool operator==(QuadraticForm const & x, QuadraticForm const & y) {
        return x.a == y.a && x.b == y.b && x.c == y.c;
    }
    friend bool operator<(QuadraticForm const & x, QuadraticForm const & y) {
        return std::tie(x.a, x.b, x.c) < std::tie(y.a, y.b, y.c);
    }

    std::string to_string() const {
        return "(" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + ")";
    }
};

/// Reduced form equivalent to a positive definite form.
inline QuadraticForm reduce(QuadraticForm f) {
    long long const d = f.discriminant();
    if (f.a <= 0 || d >= 0) throw domain_error("reduce: form is not positive definite");
    auto normalize = [&] {
        long long const two_a = 2 * f.a;
        long long b = f.b % two_a;
        if (b <= -f.a) b += two_a;
        if (b > f.a) b -= two_a;
        f.b = b;
        f.c = static_cast<long long>((static_cast<i128>(b) * b - d) / (4 * static_cast<i128>(f.a)));
    };
    normalize();
    while (f.a > f.c) {
        std::swap(f.a, f.c);
        f.b = -f.b;
        normalize();
    }
    if ((f.a == f.c || f.b == -f.a) && f.b < 0) f.b = -f.b;
    return f;
}

namespace detail {

inline long long ext_gcd(long long a, long long b, long long & x, long long & y) {
    long long x0 = 1, y0 = 0, x1 = 0, y1 = 1;
    while (b != 0) {
        long long const q = a / b;
        std::tie(a, b) = std::make_tuple(b, a - q * b);
        std::tie(x0, x1) = std::make_tuple(x1, x0 - q * x1);
        std::tie(y0, y1) = std::make_tuple(y1, y0 - q * y1);
    }
    if (a < 0) {
        a = -a;
        x0 = -x0;
        y0 = -y0;
    }
    x = x0;
    y = y0;
    return a;
}

}  // namespace detail

/// Gaussian composition of two primitive forms of the same discriminant.
inline QuadraticForm compose(QuadraticForm f1, QuadraticForm f2) {
    long long const d = f1.discriminant();
    if (f2.discriminant() != d) throw domain_error("compose: discriminants differ");
    if (f1.a > f2.a) std::swap(f1, f2);
    long long const s = (f1.b + f2.b) / 2;
    long long const n = f2.b - s;
    long long dd, y1, u;
    if (f2.a % f1.a == 0) {
        y1 = 0;
        dd = f1.a;
    } else {
        dd = detail::ext_gcd(f2.a, f1.a, u, y1);
        // u*a2 + y1*a1 = dd; the step below needs the coefficient of a2.
        y1 = u;
    }
    long long d1, x2, y2;
    if (s % dd == 0) {
        y2 = -1;
        x2 = 0;
        d1 = dd;
    } else {
        d1 = detail::ext_gcd(s, dd, x2, y2);
        y2 = -y2;
    }
    long long const v1 = f1.a / d1;
    long long const v2 = f2.a / d1;
    i128 r = (static_cast<i128>(y1) * y2 % v1 * n - static_cast<i128>(x2) * f2.c) % v1;
    if (r < 0) r += v1;
    i128 const b3 = f2.b + 2 * static_cast<i128>(v2) * r;
    i128 const a3 = static_cast<i128>(v1) * v2;
    i128 const c3 = (b3 * b3 - d) / (4 * a3);
    return reduce({static_cast<long long>(a3), static_cast<long long>(b3), static_cast<long long>(c3)});
}

inline QuadraticForm principal_form(long long d) {
    long long const b = ((d % 2) + 2) % 2;
    return {1, b, (b * b - d) / 4};
}

class ClassGroup {
  public:
    explicit ClassGroup(long long d) : disc_(make_discriminant(d)) {
        long long const absd = -d;
        for (long long a = 1; 3 * a * a <= absd; ++a) {
            for (long long b = -a + 1; b <= a; ++b) {
                if (((b - d) % 2 + 2) % 2 != 0) continue;
                long long const num = b * b - d;
                if (num % (4 * a) != 0) continue;
                long long const c = num / (4 * a);
                if (c < a) continue;
                if (b < 0 && a == c) continue;
                if (std::gcd(std::gcd(a, std::llabs(b)), c) != 1) continue;
                forms_.push_back({a, b, c});
            }
        }
        std::sort(forms_.begin(), forms_.end());
        for (std::size_t i = 0; i < forms_.size(); ++i) index_[forms_[i]] = static_cast<int>(i);
        identity_ = index_of(principal_form(d));
        if (forms_.size() <= 1024) {
            table_.assign(forms_.size(), std::vector<int>(forms_.size(), -1));
            for (std::size_t i = 0; i < forms_.size(); ++i) {
                for (std::size_t j = i; j < forms_.size(); ++j) {
                    table_[i][j] = table_[j][i] = index_of(singmod::compose(forms_[i], forms_[j]));
                }
            }
        }
    }

    Discriminant const & discriminant() const { return disc_; }
    long long d() const { return disc_.value; }
    int class_number() const { return static_cast<int>(forms_.size()); }
    std::vector<QuadraticForm> const & forms() const { return forms_; }
    QuadraticForm const & form(int i) const { return forms_[i]; }
    int identity() const { return identity_; }

    int index_of(QuadraticForm const & f) const {
        auto const it = index_.find(reduce(f));
        if (it == index_.end()) throw domain_error("form " + f.to_string() + " not in class group");
        return it->second;
    }

    int compose(int i, int j) const {
        if (!table_.empty()) return table_[i][j];
        return index_of(singmod::compose(forms_[i], forms_[j]));
    }

    int inverse(int i) const {
        auto const & f = forms_[i];
        return index_of({f.a, -f.b, f.c});
    }

    int power(int i, long e) const {
        int r = identity_;
        for (long k = 0; k < e; ++k) r = compose(r, i);
        return r;
    }

    int order(int i) const {
        int x = i, k = 1;
        while (x != identity_) {
            x = compose(x, i);
            ++k;
        }
        return k;
    }

  private:
    Discriminant disc_;
    std::vector<QuadraticForm> forms_;
    std::map<QuadraticForm, int> index_;
    std::vector<std::vector<int>> table_;
    int identity_ = 0;
};

/// Number of units of the order of discriminant d.
inline int unit_count(long long d) { return d == -3 ? 6 : d == -4 ? 4 : 2; }

/// Integral ideals of norm m in the class of form i: the number of
/// representations of m by the form, divided by the number of units.
/// The count is the same for a class and its inverse.
inline long long representation_count(ClassGroup const & g, int i, long long m) {
    if (!g.discriminant().is_fundamental()) throw domain_error("representation_count needs a fundamental discriminant");
    if (m <= 0) return 0;
    QuadraticForm const & q = g.form(i);
    long long const absd = -g.d();
    long long reps = 0;
    // 4 a Q(x, y) = (2 a x + b y)^2 + |d| y^2.
    i128 const four_am = static_cast<i128>(4) * q.a * m;
    for (long long y = 0; static_cast<i128>(absd) * y * y <= four_am; ++y) {
        i128 const rest = four_am - static_cast<i128>(absd) * y * y;
        u64 const s = isqrt(static_cast<u64>(rest));
        if (static_cast<i128>(s) * s != rest) continue;
        for (int sy : {1, -1}) {
            if (y == 0 && sy == -1) continue;
            long long const yy = sy * y;
            for (int ss : {1, -1}) {
                if (s == 0 && ss == -1) continue;
                i128 const num = static_cast<i128>(ss) * static_cast<i128>(s) - static_cast<i128>(q.b) * yy;
                if (num % (2 * q.a) == 0) ++reps;
            }
        }
    }
    return reps / unit_count(g.d());
}

/// All fundamental discriminants d with -cap <= d < 0, in decreasing order.
inline std::vector<long long> fundamental_discriminants(long long cap) {
    std::vector<long long> out;
    for (long long d = -3; d >= -cap; --d) {
        if (is_fundamental_discriminant(d)) out.push_back(d);
    }
    return out;
}

}  // namespace singmod
