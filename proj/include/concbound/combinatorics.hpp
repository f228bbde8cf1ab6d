#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "concbound/errors.hpp"

namespace concbound {

// Tuples in {1..n}^m in which every position's value occurs at least twice.
struct TupleCount {
    int m = 1;
    int n = 1;
    std::uint64_t exact = 0;
    double bound = 0.0;
};

namespace detail {

inline void check_tuple_args(int m, int n) {
    require_domain(m >= 1, "tuple count: m must be >= 1");
    require_domain(n >= 1, "tuple count: n must be >= 1");
}

}  // namespace detail

// Whether exhaustive enumeration fits the budget m * log2(n) <= 24. The
// budget also caps the count itself at n^m <= 2^24, so 64-bit results
// cannot overflow.
inline bool c_exact_in_budget(int m, int n) {
    detail::check_tuple_args(m, n);
    return static_cast<double>(m) * std::log2(static_cast<double>(n)) <= 24.0 + 1e-9;
}

// Exact count by exhaustive enumeration: walk {1..n}^m with an odometer and
// maintain the number of values occurring exactly once incrementally.
inline std::uint64_t c_exact(int m, int n) {
    detail::check_tuple_args(m, n);
    if (!c_exact_in_budget(m, n)) {
        throw BudgetError("c_exact: enumeration budget m*log2(n) <= 24 exceeded; use c_bound");
    }
    if (m == 1) return 0;  // a single position can never repeat

    std::vector<int> digits(static_cast<std::size_t>(m), 0);
    std::vector<std::int64_t> occurrences(static_cast<std::size_t>(n), 0);
    occurrences[0] = m;
    std::int64_t singletons = 0;  // number of values occurring exactly once

    const auto remove_one = [&](int v) {
        const auto c = occurrences[static_cast<std::size_t>(v)]--;
        if (c == 2) ++singletons;
        else if (c == 1) --singletons;
    };
    const auto add_one = [&](int v) {
        const auto c = occurrences[static_cast<std::size_t>(v)]++;
        if (c == 1) --singletons;
        else if (c == 0) ++singletons;
    };

    std::uint64_t count = 0;
    for (;;) {
        if (singletons == 0) ++count;
        // odometer increment
        int pos = 0;
        while (pos < m && digits[static_cast<std::size_t>(pos)] == n - 1) {
            remove_one(n - 1);
            digits[static_cast<std::size_t>(pos)] = 0;
            add_one(0);
            ++pos;
        }
        if (pos == m) break;
        const int v = digits[static_cast<std::size_t>(pos)];
        remove_one(v);
        digits[static_cast<std::size_t>(pos)] = v + 1;
        add_one(v + 1);
    }
    return count;
}

// Closed-form bound m! (n/2)^floor(m/2) from the counting lemma.
inline double c_bound(int m, int n) {
    detail::check_tuple_args(m, n);
    double f = 1.0;
    for (int i = 2; i <= m; ++i) f *= i;
    return f * std::pow(static_cast<double>(n) / 2.0, static_cast<double>(m / 2));
}

inline TupleCount count_tuples(int m, int n) {
    return TupleCount{m, n, c_exact(m, n), c_bound(m, n)};
}

}  // namespace concbound
