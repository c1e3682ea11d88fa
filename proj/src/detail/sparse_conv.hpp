#pragma once

// Sorted sparse sequences over packed integer keys and their convolutions.
//
// A d-dimensional frequency is packed as sum_i n_i B^i with |n_i| < B/2, so
// key addition is frequency addition and key negation is frequency negation.

#include "wickfield/error.hpp"

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace wickfield::detail {

template <class Key>
struct SparseSeries {
    std::vector<Key> keys;
    std::vector<double> values;

    std::size_t size() const noexcept { return keys.size(); }

    double lookup(Key k) const
    {
        auto it = std::lower_bound(keys.begin(), keys.end(), k);
        if (it == keys.end() || *it != k)
            return 0.0;
        return values[static_cast<std::size_t>(it - keys.begin())];
    }

    double total() const
    {
        double s = 0.0;
        for (double v : values)
            s += v;
        return s;
    }
};

/// Sorts terms by key and merges duplicates. Exact zeros are dropped.
template <class Key>
SparseSeries<Key> collect(std::vector<std::pair<Key, double>>& terms)
{
    std::sort(terms.begin(), terms.end());
    SparseSeries<Key> out;
    for (std::size_t i = 0; i < terms.size();) {
        const Key k = terms[i].first;
        double acc = 0.0;
        for (; i < terms.size() && terms[i].first == k; ++i)
            acc += terms[i].second;
        if (acc != 0.0) {
            out.keys.push_back(k);
            out.values.push_back(acc);
        }
    }
    return out;
}

template <class Key>
SparseSeries<Key> convolve(const SparseSeries<Key>& a, const SparseSeries<Key>& b, std::size_t max_terms)
{
    const double work = static_cast<double>(a.size()) * static_cast<double>(b.size());
    if (work > static_cast<double>(max_terms))
        throw BudgetExceeded("sparse enumeration needs " + std::to_string(static_cast<long long>(work)) +
                             " products, budget allows " + std::to_string(max_terms));
    std::vector<std::pair<Key, double>> terms;
    terms.reserve(a.size() * b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t k = 0; k < b.size(); ++k)
            terms.emplace_back(a.keys[i] + b.keys[k], a.values[i] * b.values[k]);
    return collect(terms);
}

/// base^{*j}; j = 0 gives the unit mass at key 0.
template <class Key>
SparseSeries<Key> convolution_power(const SparseSeries<Key>& base, int j, std::size_t max_terms)
{
    SparseSeries<Key> out;
    out.keys.push_back(Key{0});
    out.values.push_back(1.0);
    for (int step = 0; step < j; ++step)
        out = convolve(out, base, max_terms);
    return out;
}

/// Averages the values at k and -k. Requires a support closed under negation.
template <class Key>
void symmetrize(SparseSeries<Key>& s)
{
    const std::size_t n = s.size();
    for (std::size_t i = 0; i < n / 2 + n % 2; ++i) {
        const std::size_t m = n - 1 - i;
        if (s.keys[m] != -s.keys[i])
            throw NumericFailure("sparse support is not symmetric under n -> -n");
        const double avg = 0.5 * (s.values[i] + s.values[m]);
        s.values[i] = avg;
        s.values[m] = avg;
    }
}

} // namespace wickfield::detail
