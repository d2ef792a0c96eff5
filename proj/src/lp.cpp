#include "ssd/lp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ssd/csv.hpp"
#include "ssd/errors.hpp"

namespace ssd::lp {

namespace {

enum VStat : signed char { kBasic = 0, kAtLower = 1, kAtUpper = 2, kFreeZero = 3 };

constexpr double kPivotEps = 1e-11;  // coefficients below this never pivot
constexpr double kCostTol = 1e-9;    // reduced-cost optimality tolerance
constexpr double kBoundTol = 1e-9;   // internal bound-violation tolerance
constexpr double kRatioTie = 1e-12;

struct SparseRow {
    std::vector<std::pair<int, double>> coeffs;
    Sense sense = Sense::LE;
    double rhs = 0.0;
};

}  // namespace

// Dense tableau simplex over structural variables plus one slack per row
// (slack of row i is variable n+i). The tableau persists across solves;
// rows appended between solves are eliminated against the current basis so
// the next solve restarts from the previous optimum.
struct Model::Impl {
    std::vector<std::string> names;
    std::vector<double> lb, ub, obj;
    std::vector<SparseRow> rows;
    long iteration_limit = 500000;

    bool state_valid = false;
    size_t state_rows = 0;                 // rows folded into the tableau
    std::vector<std::vector<double>> tab;  // m rows, each of length n+m
    std::vector<double> trhs;              // B^-1 b
    std::vector<int> basis;                // basic variable per tableau row
    std::vector<signed char> vstat;        // per variable
    std::vector<double> xval;              // per variable

    size_t n() const { return lb.size(); }
    size_t m() const { return rows.size(); }
    size_t total() const { return n() + m(); }

    double var_lb(size_t j) const {
        if (j < n()) return lb[j];
        switch (rows[j - n()].sense) {
            case Sense::LE: return 0.0;
            case Sense::EQ: return 0.0;
            case Sense::GE: default: return -kInf;
        }
    }
    double var_ub(size_t j) const {
        if (j < n()) return ub[j];
        switch (rows[j - n()].sense) {
            case Sense::LE: return kInf;
            case Sense::EQ: return 0.0;
            case Sense::GE: default: return 0.0;
        }
    }
    double var_obj(size_t j) const { return j < n() ? obj[j] : 0.0; }

    bool is_fixed(size_t j) const {
        double l = var_lb(j), u = var_ub(j);
        return std::isfinite(l) && std::isfinite(u) && u - l < 1e-15;
    }

    signed char preferred_nonbasic(size_t j) const {
        if (std::isfinite(var_lb(j))) return kAtLower;
        if (std::isfinite(var_ub(j))) return kAtUpper;
        return kFreeZero;
    }

    double nonbasic_value(size_t j, signed char st) const {
        switch (st) {
            case kAtLower: return var_lb(j);
            case kAtUpper: return var_ub(j);
            default: return 0.0;
        }
    }

    void cold_start() {
        const size_t T = total(), M = m();
        tab.assign(M, {});
        trhs.resize(M);
        basis.resize(M);
        vstat.assign(T, kAtLower);
        xval.assign(T, 0.0);
        for (size_t j = 0; j < T; ++j) vstat[j] = preferred_nonbasic(j);
        for (size_t i = 0; i < M; ++i) {
            auto& row = tab[i];
            row.assign(T, 0.0);
            for (auto& [v, c] : rows[i].coeffs) row[v] += c;
            row[n() + i] = 1.0;
            trhs[i] = rows[i].rhs;
            basis[i] = static_cast<int>(n() + i);
            vstat[n() + i] = kBasic;
        }
        refresh_values();
        state_valid = true;
        state_rows = M;
    }

    // Folds rows appended since the previous solve into the tableau: each
    // new row is eliminated against the current basis and its slack enters
    // the basis for that row.
    void extend_state() {
        const size_t T = total();
        for (auto& row : tab) row.resize(T, 0.0);
        vstat.resize(T, kAtLower);
        xval.resize(T, 0.0);
        for (size_t i = state_rows; i < m(); ++i) {
            std::vector<double> row(T, 0.0);
            for (auto& [v, c] : rows[i].coeffs) row[v] += c;
            row[n() + i] = 1.0;
            double r = rows[i].rhs;
            for (size_t k = 0; k < tab.size(); ++k) {
                double c = row[basis[k]];
                if (c == 0.0) continue;
                const auto& tk = tab[k];
                for (size_t j = 0; j < T; ++j) row[j] -= c * tk[j];
                row[basis[k]] = 0.0;
                r -= c * trhs[k];
            }
            tab.push_back(std::move(row));
            trhs.push_back(r);
            basis.push_back(static_cast<int>(n() + i));
            vstat[n() + i] = kBasic;
        }
        state_rows = m();
        refresh_values();
    }

    // Re-derives every variable value: nonbasic at their recorded bound
    // (re-anchored in case bounds changed), basic from the tableau.
    void refresh_values() {
        const size_t T = total();
        for (size_t j = 0; j < T; ++j) {
            if (vstat[j] == kBasic) continue;
            signed char st = vstat[j];
            if ((st == kAtLower && !std::isfinite(var_lb(j))) ||
                (st == kAtUpper && !std::isfinite(var_ub(j))))
                st = preferred_nonbasic(j);
            vstat[j] = st;
            xval[j] = nonbasic_value(j, st);
        }
        for (size_t r = 0; r < tab.size(); ++r) {
            double v = trhs[r];
            const auto& row = tab[r];
            for (size_t j = 0; j < T; ++j) {
                if (vstat[j] != kBasic && xval[j] != 0.0) v -= row[j] * xval[j];
            }
            xval[basis[r]] = v;
        }
    }

    void pivot(size_t prow, size_t q) {
        auto& pr = tab[prow];
        const size_t T = pr.size();
        const double inv = 1.0 / pr[q];
        for (size_t j = 0; j < T; ++j) pr[j] *= inv;
        pr[q] = 1.0;
        trhs[prow] *= inv;
        for (size_t r = 0; r < tab.size(); ++r) {
            if (r == prow) continue;
            double c = tab[r][q];
            if (c == 0.0) continue;
            auto& row = tab[r];
            for (size_t j = 0; j < T; ++j) row[j] -= c * pr[j];
            row[q] = 0.0;
            trhs[r] -= c * trhs[prow];
        }
        basis[prow] = static_cast<int>(q);
        vstat[q] = kBasic;
    }

    struct Ratio {
        double theta = kInf;
        int row = -1;         // -1: entering variable flips to its far bound
        signed char hit = 0;  // bound the leaving variable lands on
    };

    // Blocking step length for entering variable q moving in direction dir.
    // In phase 1 an infeasible basic blocks only at the bound it violates,
    // once it reaches it; feasible basics block as usual. Ties prefer the
    // largest pivot magnitude, then the smallest basic variable index; a
    // tied bound flip is kept in preference to a pivot.
    Ratio ratio_test(size_t q, int dir, bool phase1) const {
        Ratio best;
        {
            double l = var_lb(q), u = var_ub(q);
            if (vstat[q] != kFreeZero && std::isfinite(l) && std::isfinite(u))
                best.theta = u - l;
        }
        for (size_t r = 0; r < tab.size(); ++r) {
            double a = tab[r][q];
            if (std::fabs(a) <= kPivotEps) continue;
            size_t b = basis[r];
            double xb = xval[b];
            double bl = var_lb(b), bu = var_ub(b);
            double delta = -dir * a;  // basic change per unit step
            double t = kInf;
            signed char hit = 0;
            if (phase1 && xb < bl - kBoundTol) {
                if (delta > 0) { t = (bl - xb) / delta; hit = kAtLower; }
            } else if (phase1 && xb > bu + kBoundTol) {
                if (delta < 0) { t = (xb - bu) / (-delta); hit = kAtUpper; }
            } else if (delta > 0) {
                if (std::isfinite(bu)) { t = (bu - xb) / delta; hit = kAtUpper; }
            } else {
                if (std::isfinite(bl)) { t = (xb - bl) / (-delta); hit = kAtLower; }
            }
            if (t == kInf) continue;
            if (t < 0) t = 0;
            bool take = false;
            if (t < best.theta - kRatioTie) {
                take = true;
            } else if (t <= best.theta + kRatioTie && best.row >= 0) {
                double cur = std::fabs(tab[best.row][q]);
                double cand = std::fabs(a);
                if (cand > cur + kRatioTie) take = true;
                else if (cand > cur - kRatioTie && basis[r] < basis[best.row]) take = true;
            }
            if (take) {
                best.theta = t;
                best.row = static_cast<int>(r);
                best.hit = hit;
            }
        }
        return best;
    }

    void apply_step(size_t q, int dir, const Ratio& rt) {
        if (rt.theta != 0.0) {
            for (size_t r = 0; r < tab.size(); ++r) {
                double a = tab[r][q];
                if (a != 0.0) xval[basis[r]] -= dir * a * rt.theta;
            }
            xval[q] += dir * rt.theta;
        }
        if (rt.row < 0) {
            vstat[q] = (dir > 0) ? kAtUpper : kAtLower;
            xval[q] = nonbasic_value(q, vstat[q]);
        } else {
            size_t leave = basis[rt.row];
            vstat[leave] = rt.hit;
            xval[leave] = nonbasic_value(leave, rt.hit);
            pivot(static_cast<size_t>(rt.row), q);
        }
    }

    // Dantzig pricing; Bland's rule (first eligible index) once `bland`.
    template <typename ScoreFn>
    int choose_entering(ScoreFn&& score, bool bland) const {
        int best = -1;
        double best_score = kCostTol;
        for (size_t j = 0; j < total(); ++j) {
            if (vstat[j] == kBasic || is_fixed(j)) continue;
            double s = score(j);
            if (s <= kCostTol) continue;
            if (bland) return static_cast<int>(j);
            if (s > best_score + 1e-15) {
                best = static_cast<int>(j);
                best_score = s;
            }
        }
        return best;
    }

    double infeasibility() const {
        double total_inf = 0.0;
        for (size_t r = 0; r < tab.size(); ++r) {
            size_t b = basis[r];
            double x = xval[b];
            double l = var_lb(b), u = var_ub(b);
            if (x < l) total_inf += l - x;
            if (x > u) total_inf += x - u;
        }
        return total_inf;
    }

    // Phase 1: composite infeasibility minimisation. Returns false when the
    // model is certified infeasible.
    bool phase1(long& iters) {
        const size_t T = total();
        std::vector<double> price(T);
        const long bland_from = iters + 2000 + 20 * static_cast<long>(m());
        while (infeasibility() > kBoundTol) {
            if (iters >= iteration_limit) return true;  // caller reports the cap
            std::fill(price.begin(), price.end(), 0.0);
            for (size_t r = 0; r < tab.size(); ++r) {
                size_t b = basis[r];
                double x = xval[b];
                double g = 0.0;
                if (x < var_lb(b) - kBoundTol) g = -1.0;
                else if (x > var_ub(b) + kBoundTol) g = 1.0;
                if (g == 0.0) continue;
                const auto& row = tab[r];
                for (size_t j = 0; j < T; ++j) price[j] += g * row[j];
            }
            auto score = [&](size_t j) -> double {
                switch (vstat[j]) {
                    case kAtLower: return price[j];
                    case kAtUpper: return -price[j];
                    case kFreeZero: return std::fabs(price[j]);
                    default: return 0.0;
                }
            };
            int q = choose_entering(score, iters > bland_from);
            if (q < 0) return false;
            int dir;
            if (vstat[q] == kAtLower) dir = 1;
            else if (vstat[q] == kAtUpper) dir = -1;
            else dir = price[q] > 0 ? 1 : -1;
            Ratio rt = ratio_test(static_cast<size_t>(q), dir, true);
            if (rt.theta == kInf)
                throw SolveError("lp: phase-1 ratio test found no blocking bound");
            apply_step(static_cast<size_t>(q), dir, rt);
            ++iters;
        }
        return true;
    }

    void build_zrow(std::vector<double>& z) const {
        const size_t T = total();
        z.assign(T, 0.0);
        for (size_t j = 0; j < n(); ++j) z[j] = obj[j];
        for (size_t r = 0; r < tab.size(); ++r) {
            double cb = var_obj(basis[r]);
            if (cb == 0.0) continue;
            const auto& row = tab[r];
            for (size_t j = 0; j < T; ++j) z[j] -= cb * row[j];
        }
        for (int b : basis) z[b] = 0.0;
    }

    Status phase2(long& iters) {
        std::vector<double> z;
        build_zrow(z);
        const long bland_from = iters + 5000 + 20 * static_cast<long>(m());
        while (true) {
            if (iters >= iteration_limit) return Status::IterationLimit;
            auto score = [&](size_t j) -> double {
                switch (vstat[j]) {
                    case kAtLower: return z[j];
                    case kAtUpper: return -z[j];
                    case kFreeZero: return std::fabs(z[j]);
                    default: return 0.0;
                }
            };
            int q = choose_entering(score, iters > bland_from);
            if (q < 0) return Status::Optimal;
            int dir;
            if (vstat[q] == kAtLower) dir = 1;
            else if (vstat[q] == kAtUpper) dir = -1;
            else dir = z[q] > 0 ? 1 : -1;
            Ratio rt = ratio_test(static_cast<size_t>(q), dir, false);
            if (rt.theta == kInf) return Status::Unbounded;
            int prow = rt.row;
            apply_step(static_cast<size_t>(q), dir, rt);
            if (prow >= 0) {
                double zq = z[q];
                if (zq != 0.0) {
                    const auto& pr = tab[prow];
                    for (size_t j = 0; j < pr.size(); ++j) z[j] -= zq * pr[j];
                }
                z[q] = 0.0;
            }
            ++iters;
        }
    }

    // Residuals against the original sparse rows (not the tableau), so
    // accumulated pivot drift is detected.
    double max_row_violation() const {
        double worst = 0.0;
        for (const auto& row : rows) {
            double act = 0.0;
            for (auto& [v, c] : row.coeffs) act += c * xval[v];
            double viol = 0.0;
            switch (row.sense) {
                case Sense::LE: viol = act - row.rhs; break;
                case Sense::GE: viol = row.rhs - act; break;
                case Sense::EQ: viol = std::fabs(act - row.rhs); break;
            }
            worst = std::max(worst, viol);
        }
        return worst;
    }

    Solution run() {
        Solution sol;
        for (size_t j = 0; j < n(); ++j) {
            if (lb[j] > ub[j]) {
                sol.status = Status::Infeasible;
                return sol;
            }
        }
        for (int attempt = 0; attempt < 2; ++attempt) {
            if (!state_valid || attempt > 0) cold_start();
            else extend_state();

            long iters = 0;
            bool feasible = phase1(iters);
            if (iters >= iteration_limit) {
                sol.status = Status::IterationLimit;
                sol.iterations = iters;
                return sol;
            }
            if (!feasible) {
                sol.status = Status::Infeasible;
                sol.iterations = iters;
                return sol;
            }
            sol.status = phase2(iters);
            sol.iterations = iters;
            if (sol.status != Status::Optimal) return sol;

            if (max_row_violation() <= kFeasTol) break;
            if (attempt == 1)
                throw SolveError("lp: residual infeasibility after cold restart "
                                 "(numerically singular basis)");
            state_valid = false;
        }

        sol.values.assign(n(), 0.0);
        double objv = 0.0;
        for (size_t j = 0; j < n(); ++j) {
            double v = xval[j];
            if (std::isfinite(lb[j]) && v < lb[j] && v > lb[j] - kBoundTol) v = lb[j];
            if (std::isfinite(ub[j]) && v > ub[j] && v < ub[j] + kBoundTol) v = ub[j];
            sol.values[j] = v;
            objv += obj[j] * v;
        }
        sol.objective = objv;
        return sol;
    }
};

Model::Model() : impl_(std::make_unique<Impl>()) {}
Model::~Model() = default;
Model::Model(Model&&) noexcept = default;
Model& Model::operator=(Model&&) noexcept = default;

int Model::add_variable(const std::string& name, double lower, double upper) {
    if (std::isnan(lower) || std::isnan(upper))
        throw SolveError("lp: NaN bound on variable " + name);
    // slack indices shift with the structural count, so an existing basis
    // cannot be reused once variables are appended
    impl_->state_valid = false;
    impl_->names.push_back(name);
    impl_->lb.push_back(lower);
    impl_->ub.push_back(upper);
    impl_->obj.push_back(0.0);
    return static_cast<int>(impl_->names.size()) - 1;
}

void Model::set_objective(int var, double coeff) {
    if (var < 0 || var >= static_cast<int>(impl_->n()))
        throw SolveError("lp: objective references undeclared variable");
    if (!std::isfinite(coeff)) throw SolveError("lp: non-finite objective coefficient");
    impl_->obj[var] = coeff;
}

int Model::add_row(const std::vector<std::pair<int, double>>& coeffs,
                   Sense sense, double rhs) {
    SparseRow row;
    for (auto& [v, c] : coeffs) {
        if (v < 0 || v >= static_cast<int>(impl_->n()))
            throw SolveError("lp: row references undeclared variable index " +
                             std::to_string(v));
        if (!std::isfinite(c)) throw SolveError("lp: non-finite row coefficient");
        if (c != 0.0) row.coeffs.emplace_back(v, c);
    }
    if (!std::isfinite(rhs)) throw SolveError("lp: non-finite rhs");
    row.sense = sense;
    row.rhs = rhs;
    impl_->rows.push_back(std::move(row));
    return static_cast<int>(impl_->rows.size()) - 1;
}

Solution Model::solve() { return impl_->run(); }

int Model::num_variables() const { return static_cast<int>(impl_->n()); }
int Model::num_rows() const { return static_cast<int>(impl_->m()); }

void Model::set_iteration_limit(long limit) { impl_->iteration_limit = limit; }

std::string Model::to_lp_text() const {
    std::ostringstream out;
    out << "Maximize\n obj:";
    bool any = false;
    for (size_t j = 0; j < impl_->n(); ++j) {
        if (impl_->obj[j] == 0.0) continue;
        out << (impl_->obj[j] >= 0 ? " + " : " - ")
            << csv::format_double(std::fabs(impl_->obj[j])) << " " << impl_->names[j];
        any = true;
    }
    if (!any) out << " 0";
    out << "\nSubject To\n";
    for (size_t i = 0; i < impl_->m(); ++i) {
        out << " r" << i << ":";
        for (auto& [v, c] : impl_->rows[i].coeffs)
            out << (c >= 0 ? " + " : " - ") << csv::format_double(std::fabs(c))
                << " " << impl_->names[v];
        switch (impl_->rows[i].sense) {
            case Sense::LE: out << " <= "; break;
            case Sense::EQ: out << " = "; break;
            case Sense::GE: out << " >= "; break;
        }
        out << csv::format_double(impl_->rows[i].rhs) << "\n";
    }
    out << "Bounds\n";
    for (size_t j = 0; j < impl_->n(); ++j) {
        double l = impl_->lb[j], u = impl_->ub[j];
        if (l == -kInf && u == kInf)
            out << " " << impl_->names[j] << " free\n";
        else if (u == kInf)
            out << " " << impl_->names[j] << " >= " << csv::format_double(l) << "\n";
        else if (l == -kInf)
            out << " " << impl_->names[j] << " <= " << csv::format_double(u) << "\n";
        else
            out << " " << csv::format_double(l) << " <= " << impl_->names[j]
                << " <= " << csv::format_double(u) << "\n";
    }
    out << "End\n";
    return out.str();
}

}  // namespace ssd::lp
