// Minimal linear-programming contract shared by the SSD solvers: build a
// model incrementally (bounded variables, sparse rows, linear maximisation
// objective), solve, query status and primal values.
//
// The backend is a self-contained dense bounded-variable simplex. Solves are
// deterministic for identical inputs: pivoting and tie-break rules are fixed.
// Rows appended after a solve warm-start the next one from the previous
// basis.

#pragma once

#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace ssd::lp {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Primal feasibility tolerance guaranteed on optimal solutions. Cut
// separation uses a strictly looser 1e-6 so numerically satisfied rows are
// never re-added.
constexpr double kFeasTol = 1e-7;

enum class Sense { LE, EQ, GE };
enum class Status { Optimal, Infeasible, Unbounded, IterationLimit };

struct Solution {
    Status status = Status::Infeasible;
    double objective = 0.0;
    std::vector<double> values;  // one per declared variable
    long iterations = 0;         // simplex pivots spent on this solve
};

class Model {
public:
    Model();
    ~Model();
    Model(Model&&) noexcept;
    Model& operator=(Model&&) noexcept;
    Model(const Model&) = delete;
    Model& operator=(const Model&) = delete;

    // Returns the variable index. Bounds may be +/-kInf.
    int add_variable(const std::string& name, double lower, double upper);

    // Objective is always maximisation; unset coefficients are zero.
    void set_objective(int var, double coeff);

    // Returns the row index. Throws SolveError if a coefficient references
    // an undeclared variable or is non-finite.
    int add_row(const std::vector<std::pair<int, double>>& coeffs,
                Sense sense, double rhs);

    Solution solve();

    int num_variables() const;
    int num_rows() const;

    void set_iteration_limit(long limit);

    // Model dump in LP text format for external cross-checking.
    std::string to_lp_text() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace ssd::lp
