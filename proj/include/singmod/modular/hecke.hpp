#pragma once

// Images of a point of Y(1)^n under the Hecke correspondence T_N: in each
// coordinate the unramified roots Y of Phi_{N_i}(x_i, Y), combined as a
// product set.

#include <gmpxx.h>

#include <algorithm>
#include <vector>

#include "singmod/modular/modpoly.hpp"
#include "singmod/padic/roots.hpp"

namespace singmod {

using HeckeLevel = std::vector<int>;

namespace detail {

inline std::vector<std::vector<PadicNumber>> product_set(std::vector<std::vector<PadicNumber>> const & factors) {
    std::vector<std::vector<PadicNumber>> out{{}};
    for (auto const & choices : factors) {
        std::vector<std::vector<PadicNumber>> next;
        for (auto const & prefix : out) {
            for (auto const & c : choices) {
                next.push_back(prefix);
                next.back().push_back(c);
            }
        }
        out = std::move(next);
    }
    return out;
}

inline void check_levels(std::size_t n, HeckeLevel const & levels) {
    if (levels.size() != n) throw domain_error("Hecke level and point have different lengths");
    for (int m : levels) {
        if (m < 1) throw domain_error("Hecke level entries must be positive");
    }
}

}  // namespace detail

/// Point with exact integer coordinates: the roots of the square-free part
/// of Phi_{N_i}(x_i, Y).
inline std::vector<std::vector<PadicNumber>> hecke_image_point(std::vector<mpz_class> const & x, HeckeLevel const & levels,
                                                               u64 p, long precision, int f_max) {
    detail::check_levels(x.size(), levels);
    std::vector<std::vector<PadicNumber>> per;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (levels[i] == 1) {
            per.push_back({PadicNumber::from_integer(x[i], p, precision)});
            continue;
        }
        per.push_back(roots_in_unramified(modular_poly(levels[i]).in_y(x[i]), p, f_max, precision));
    }
    return detail::product_set(per);
}

/// Point with p-adic coordinates.
inline std::vector<std::vector<PadicNumber>> hecke_image_point(std::vector<PadicNumber> const & x, HeckeLevel const & levels,
                                                               long precision, int f_max) {
    detail::check_levels(x.size(), levels);
    std::vector<std::vector<PadicNumber>> per;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i].ord_lower_bound() < 0) throw domain_error("Hecke image needs integral coordinates");
        if (levels[i] == 1) {
            per.push_back({x[i]});
            continue;
        }
        PadicPolynomial const f = modular_poly(levels[i]).in_y(x[i]);
        per.push_back(roots_in_unramified(f, std::max(f_max, f.ring()->degree()), precision));
    }
    return detail::product_set(per);
}

}  // namespace singmod
