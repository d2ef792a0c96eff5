// Left-tail machinery for second-order stochastic dominance: cumulative
// scaled tails of a scenario return series, tail differences against a
// benchmark, and the sorted-prefix order statistics that drive cut
// separation.

#pragma once

#include <cstddef>
#include <vector>

namespace ssd::tails {

// tau[s-1] = (1/S) * (sum of the s smallest returns), s = 1..S.
// tau.back() equals the arithmetic mean of the series.
struct TailVector {
    std::vector<double> tau;
    size_t size() const { return tau.size(); }
};

struct TailDifferences {
    std::vector<double> v;   // portfolio tail minus benchmark tail, per s
    bool dominates;          // all entries >= -tolerance
};

// Absolute tolerance on tail differences when flagging dominance; LP noise
// must not flip the flag.
constexpr double kDominanceTol = 1e-9;

TailVector tail_vector(const std::vector<double>& returns);

TailDifferences tail_differences(const TailVector& portfolio,
                                 const TailVector& benchmark,
                                 double tol = kDominanceTol);

// One ascending sort of the returns; order[0..s-1] is the scenario set
// attaining the minimum sum over all subsets of cardinality s, for every s
// simultaneously. Ties break by ascending scenario index.
struct WorstPrefixes {
    std::vector<int> order;          // scenario indices, ascending by return
    std::vector<double> prefix_sum;  // prefix_sum[s-1] = sum of s smallest
};

WorstPrefixes worst_prefixes(const std::vector<double>& returns);

}  // namespace ssd::tails
