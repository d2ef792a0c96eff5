#include "ssd/tails.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ssd/errors.hpp"

namespace ssd::tails {

static void check_finite(const std::vector<double>& r, const char* what) {
    if (r.empty()) throw DataError(std::string(what) + ": empty series");
    for (double x : r)
        if (!std::isfinite(x)) throw DataError(std::string(what) + ": non-finite value");
}

TailVector tail_vector(const std::vector<double>& returns) {
    check_finite(returns, "tail_vector");
    const size_t S = returns.size();
    std::vector<double> sorted(returns);
    std::sort(sorted.begin(), sorted.end());
    TailVector t;
    t.tau.resize(S);
    double acc = 0.0;
    for (size_t s = 0; s < S; ++s) {
        acc += sorted[s];
        t.tau[s] = acc / static_cast<double>(S);
    }
    return t;
}

TailDifferences tail_differences(const TailVector& portfolio,
                                 const TailVector& benchmark,
                                 double tol) {
    if (portfolio.size() != benchmark.size())
        throw DataError("tail_differences: length mismatch");
    TailDifferences d;
    d.v.resize(portfolio.size());
    d.dominates = true;
    for (size_t s = 0; s < portfolio.size(); ++s) {
        d.v[s] = portfolio.tau[s] - benchmark.tau[s];
        if (d.v[s] < -tol) d.dominates = false;
    }
    return d;
}

WorstPrefixes worst_prefixes(const std::vector<double>& returns) {
    check_finite(returns, "worst_prefixes");
    const size_t S = returns.size();
    WorstPrefixes w;
    w.order.resize(S);
    std::iota(w.order.begin(), w.order.end(), 0);
    std::stable_sort(w.order.begin(), w.order.end(),
                     [&](int a, int b) { return returns[a] < returns[b]; });
    w.prefix_sum.resize(S);
    double acc = 0.0;
    for (size_t s = 0; s < S; ++s) {
        acc += returns[w.order[s]];
        w.prefix_sum[s] = acc;
    }
    return w;
}

}  // namespace ssd::tails
