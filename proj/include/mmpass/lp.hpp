#pragma once

// Dense linear programs and a bounded-variable primal simplex solver.
//
// The solver runs a textbook two-phase method on a dense tableau. Nonbasic
// columns sit at either bound, so finite upper bounds never become rows.
// Pricing is Dantzig's largest reduced cost; after a streak of degenerate
// pivots it switches to Bland's lowest-index rule, which cannot cycle.
// Every optimal point is re-checked against the original rows before it is
// returned.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "mmpass/errors.hpp"

namespace mmpass {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kFeasTol = 1e-7;
inline constexpr double kOptTol = 1e-7;

enum class Relation { less_equal, equal, greater_equal };

/// Maps an LP column back to its domain meaning.
struct VariableLabel {
    enum class Kind { flow, activation, path, other };
    Kind kind = Kind::other;
    std::size_t index = 0;  // link id for flow/activation, path index for path

    friend bool operator==(const VariableLabel&, const VariableLabel&) = default;
};

struct Constraint {
    std::vector<double> coeffs;
    Relation relation = Relation::less_equal;
    double rhs = 0.0;
    std::string name;
};

/// maximize objective . x  subject to constraints and lower <= x <= upper.
struct LpProblem {
    std::vector<double> objective;
    std::vector<Constraint> constraints;
    std::vector<double> lower;
    std::vector<double> upper;
    std::vector<std::string> names;
    std::vector<VariableLabel> labels;

    std::size_t variable_count() const noexcept { return objective.size(); }

    std::size_t add_variable(std::string name, double cost, double lo = 0.0, double hi = kInf,
                             VariableLabel label = {}) {
        objective.push_back(cost);
        lower.push_back(lo);
        upper.push_back(hi);
        names.push_back(std::move(name));
        labels.push_back(label);
        for (auto& c : constraints) c.coeffs.push_back(0.0);
        return objective.size() - 1;
    }

    /// Appends an all-zero row and returns it for filling in.
    Constraint& add_constraint(std::string name, Relation rel, double rhs) {
        constraints.push_back({std::vector<double>(objective.size(), 0.0), rel, rhs, std::move(name)});
        return constraints.back();
    }
};

inline std::vector<std::string> validate(const LpProblem& p) {
    std::vector<std::string> errs;
    const auto n = p.objective.size();
    if (p.lower.size() != n || p.upper.size() != n) errs.push_back("bound vectors do not match objective width");
    if (!p.names.empty() && p.names.size() != n) errs.push_back("name vector does not match objective width");
    if (!p.labels.empty() && p.labels.size() != n) errs.push_back("label vector does not match objective width");
    for (std::size_t j = 0; j < n; ++j) {
        if (!std::isfinite(p.objective[j])) errs.push_back("objective coefficient " + std::to_string(j) + " not finite");
        if (j < p.lower.size() && j < p.upper.size()) {
            if (!std::isfinite(p.lower[j])) errs.push_back("lower bound " + std::to_string(j) + " not finite");
            if (std::isnan(p.upper[j]) || p.upper[j] < p.lower[j])
                errs.push_back("upper bound " + std::to_string(j) + " below lower bound");
        }
    }
    for (std::size_t i = 0; i < p.constraints.size(); ++i) {
        const auto& c = p.constraints[i];
        if (c.coeffs.size() != n) errs.push_back("row " + std::to_string(i) + " has wrong width");
        if (!std::isfinite(c.rhs)) errs.push_back("row " + std::to_string(i) + " rhs not finite");
        for (double a : c.coeffs)
            if (!std::isfinite(a)) {
                errs.push_back("row " + std::to_string(i) + " has a non-finite coefficient");
                break;
            }
    }
    return errs;
}

struct LpSolution {
    enum class Status { optimal, infeasible, unbounded };
    Status status = Status::infeasible;
    double value = 0.0;
    std::vector<double> point;
    std::size_t iterations = 0;

    bool optimal() const noexcept { return status == Status::optimal; }
};

inline const char* to_string(LpSolution::Status s) {
    switch (s) {
        case LpSolution::Status::optimal: return "optimal";
        case LpSolution::Status::infeasible: return "infeasible";
        case LpSolution::Status::unbounded: return "unbounded";
    }
    return "?";
}

/// Largest violation of any row or bound by point x (0 when feasible).
inline double max_violation(const LpProblem& p, const std::vector<double>& x) {
    double worst = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        worst = std::max(worst, p.lower[j] - x[j]);
        if (std::isfinite(p.upper[j])) worst = std::max(worst, x[j] - p.upper[j]);
    }
    for (const auto& c : p.constraints) {
        double lhs = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) lhs += c.coeffs[j] * x[j];
        const double scale = std::max(1.0, std::abs(c.rhs));
        double v = 0.0;
        switch (c.relation) {
            case Relation::less_equal: v = lhs - c.rhs; break;
            case Relation::greater_equal: v = c.rhs - lhs; break;
            case Relation::equal: v = std::abs(lhs - c.rhs); break;
        }
        worst = std::max(worst, v / scale);
    }
    return worst;
}

namespace detail {

class BoundedSimplex {
public:
    static constexpr double kPivotTol = 1e-9;
    static constexpr double kCostTol = 1e-9;
    static constexpr double kZeroStep = 1e-12;
    static constexpr std::size_t kDegenerateStreak = 50;

    explicit BoundedSimplex(const LpProblem& p) : prob_(p) {}

    LpSolution run() {
        setup();
        LpSolution out;

        if (artificial_count_ > 0) {
            std::vector<double> phase1(cols_, 0.0);
            for (std::size_t j = first_artificial_; j < cols_; ++j) phase1[j] = -1.0;
            if (iterate(phase1, false) != Outcome::optimal)
                throw SolverError("phase 1 reported unbounded; tableau is corrupt");
            double infeas = 0.0;
            for (std::size_t j = first_artificial_; j < cols_; ++j) infeas += x_[j];
            if (infeas > kFeasTol) {
                out.status = LpSolution::Status::infeasible;
                out.iterations = iterations_;
                return out;
            }
            retire_artificials();
        }

        std::vector<double> cost(cols_, 0.0);
        for (std::size_t j = 0; j < n_; ++j) cost[j] = prob_.objective[j];
        if (iterate(cost, true) == Outcome::unbounded) {
            out.status = LpSolution::Status::unbounded;
            out.iterations = iterations_;
            return out;
        }

        out.status = LpSolution::Status::optimal;
        out.point.resize(n_);
        for (std::size_t j = 0; j < n_; ++j) {
            double v = prob_.lower[j] + x_[j];
            v = std::max(v, prob_.lower[j]);
            if (std::isfinite(prob_.upper[j])) v = std::min(v, prob_.upper[j]);
            out.point[j] = v;
            out.value += prob_.objective[j] * v;
        }
        out.iterations = iterations_;
        if (const double viol = max_violation(prob_, out.point); viol > kFeasTol)
            throw SolverError("optimal point fails verification (violation " + std::to_string(viol) + ")");
        return out;
    }

private:
    enum class Outcome { optimal, unbounded };

    double& at(std::size_t r, std::size_t c) { return tab_[r * cols_ + c]; }
    double at(std::size_t r, std::size_t c) const { return tab_[r * cols_ + c]; }

    void setup() {
        n_ = prob_.variable_count();
        m_ = prob_.constraints.size();

        std::size_t slacks = 0;
        for (const auto& c : prob_.constraints)
            if (c.relation != Relation::equal) ++slacks;

        // Shifted right-hand sides and row signs.
        std::vector<double> rhs(m_);
        std::vector<double> sign(m_, 1.0);
        std::vector<double> slack_coef(m_, 0.0);
        for (std::size_t i = 0; i < m_; ++i) {
            const auto& c = prob_.constraints[i];
            double b = c.rhs;
            for (std::size_t j = 0; j < n_; ++j) b -= c.coeffs[j] * prob_.lower[j];
            if (c.relation == Relation::less_equal) slack_coef[i] = 1.0;
            if (c.relation == Relation::greater_equal) slack_coef[i] = -1.0;
            if (b < 0.0) {
                sign[i] = -1.0;
                b = -b;
            }
            rhs[i] = b;
        }

        artificial_count_ = 0;
        for (std::size_t i = 0; i < m_; ++i)
            if (sign[i] * slack_coef[i] <= 0.0) ++artificial_count_;

        first_artificial_ = n_ + slacks;
        cols_ = first_artificial_ + artificial_count_;
        tab_.assign(m_ * cols_, 0.0);
        x_.assign(cols_, 0.0);
        ub_.assign(cols_, kInf);
        at_upper_.assign(cols_, 0);
        blocked_.assign(cols_, 0);
        basis_.assign(m_, 0);

        for (std::size_t j = 0; j < n_; ++j) ub_[j] = prob_.upper[j] - prob_.lower[j];

        std::size_t next_slack = n_;
        std::size_t next_art = first_artificial_;
        for (std::size_t i = 0; i < m_; ++i) {
            const auto& c = prob_.constraints[i];
            for (std::size_t j = 0; j < n_; ++j) at(i, j) = sign[i] * c.coeffs[j];
            std::size_t slack_col = cols_;
            if (slack_coef[i] != 0.0) {
                slack_col = next_slack++;
                at(i, slack_col) = sign[i] * slack_coef[i];
            }
            if (slack_col < cols_ && at(i, slack_col) > 0.0) {
                basis_[i] = slack_col;
            } else {
                at(i, next_art) = 1.0;
                basis_[i] = next_art++;
            }
            x_[basis_[i]] = rhs[i];
        }
    }

    // Drives zero-valued artificials out of the basis where possible and
    // pins every artificial at zero for phase 2.
    void retire_artificials() {
        for (std::size_t r = 0; r < m_; ++r) {
            if (basis_[r] < first_artificial_) continue;
            std::size_t best = cols_;
            double best_mag = kPivotTol;
            for (std::size_t j = 0; j < first_artificial_; ++j) {
                if (is_basic(j)) continue;
                if (std::abs(at(r, j)) > best_mag) {
                    best_mag = std::abs(at(r, j));
                    best = j;
                }
            }
            if (best < cols_) {
                const std::size_t leaving = basis_[r];
                pivot(r, best);
                x_[leaving] = 0.0;
                at_upper_[leaving] = 0;
            }
        }
        for (std::size_t j = first_artificial_; j < cols_; ++j) {
            ub_[j] = 0.0;
            blocked_[j] = 1;
            if (!is_basic(j)) x_[j] = 0.0;
        }
    }

    bool is_basic(std::size_t j) const {
        return std::find(basis_.begin(), basis_.end(), j) != basis_.end();
    }

    void pivot(std::size_t r, std::size_t j) {
        const double piv = at(r, j);
        for (std::size_t c = 0; c < cols_; ++c) at(r, c) /= piv;
        at(r, j) = 1.0;
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == r) continue;
            const double f = at(i, j);
            if (f == 0.0) continue;
            for (std::size_t c = 0; c < cols_; ++c) at(i, c) -= f * at(r, c);
            at(i, j) = 0.0;
        }
        basis_[r] = j;
        at_upper_[j] = 0;
    }

    Outcome iterate(const std::vector<double>& cost, bool allow_unbounded) {
        const std::size_t limit = 200 * (m_ + cols_) + 1000;
        std::size_t degenerate = 0;
        bool bland = false;
        std::vector<char> basic(cols_, 0);
        std::vector<double> reduced(cols_, 0.0);

        for (std::size_t it = 0;; ++it) {
            if (it > limit) throw SolverError("simplex iteration limit exceeded");
            std::fill(basic.begin(), basic.end(), 0);
            for (auto b : basis_) basic[b] = 1;

            // Pricing.
            std::size_t enter = cols_;
            double best = 0.0;
            for (std::size_t j = 0; j < cols_; ++j) {
                if (basic[j] || blocked_[j]) continue;
                double d = cost[j];
                for (std::size_t i = 0; i < m_; ++i) d -= cost[basis_[i]] * at(i, j);
                reduced[j] = d;
                const bool up = !at_upper_[j] && d > kCostTol && ub_[j] > 0.0;
                const bool down = at_upper_[j] && d < -kCostTol;
                if (!up && !down) continue;
                if (bland) {
                    enter = j;
                    break;
                }
                if (std::abs(d) > best) {
                    best = std::abs(d);
                    enter = j;
                }
            }
            if (enter == cols_) return Outcome::optimal;

            const double dir = at_upper_[enter] ? -1.0 : 1.0;

            // Ratio test; ties go to the lowest basic column index.
            double step = ub_[enter];
            std::size_t leave_row = m_;
            bool leave_at_upper = false;
            for (std::size_t i = 0; i < m_; ++i) {
                const double rate = -dir * at(i, enter);
                const std::size_t bvar = basis_[i];
                double lim = kInf;
                bool to_upper = false;
                if (rate < -kPivotTol) {
                    lim = std::max(0.0, x_[bvar]) / -rate;
                } else if (rate > kPivotTol && std::isfinite(ub_[bvar])) {
                    lim = std::max(0.0, ub_[bvar] - x_[bvar]) / rate;
                    to_upper = true;
                } else {
                    continue;
                }
                const bool better = lim < step - kZeroStep ||
                                    (lim <= step + kZeroStep && leave_row < m_ && bvar < basis_[leave_row]);
                if (better) {
                    step = lim;
                    leave_row = i;
                    leave_at_upper = to_upper;
                }
            }

            if (!std::isfinite(step)) {
                if (!allow_unbounded) throw SolverError("unbounded ray in phase 1");
                return Outcome::unbounded;
            }

            ++iterations_;
            if (step <= kZeroStep) {
                if (++degenerate > kDegenerateStreak) bland = true;
            } else {
                degenerate = 0;
            }

            x_[enter] += dir * step;
            for (std::size_t i = 0; i < m_; ++i) x_[basis_[i]] += -dir * at(i, enter) * step;

            if (leave_row == m_) {
                // Bound flip.
                at_upper_[enter] = !at_upper_[enter];
                x_[enter] = at_upper_[enter] ? ub_[enter] : 0.0;
                continue;
            }

            const std::size_t leaving = basis_[leave_row];
            pivot(leave_row, enter);
            x_[leaving] = leave_at_upper ? ub_[leaving] : 0.0;
            at_upper_[leaving] = leave_at_upper ? 1 : 0;
        }
    }

    const LpProblem& prob_;
    std::size_t n_ = 0, m_ = 0, cols_ = 0;
    std::size_t first_artificial_ = 0, artificial_count_ = 0;
    std::vector<double> tab_;
    std::vector<double> x_;
    std::vector<double> ub_;
    std::vector<char> at_upper_;
    std::vector<char> blocked_;
    std::vector<std::size_t> basis_;
    std::size_t iterations_ = 0;
};

}  // namespace detail

/// Solves the LP. Returns infeasible/unbounded as data; throws SolverError when
/// the method stalls or the optimal point fails re-verification.
inline LpSolution solve(const LpProblem& prob) {
    if (auto errs = validate(prob); !errs.empty()) throw ValidationError(std::move(errs));
    detail::BoundedSimplex simplex(prob);
    return simplex.run();
}

/// Writes the problem in CPLEX LP text format.
inline void write_lp_format(std::ostream& os, const LpProblem& p) {
    auto name = [&](std::size_t j) {
        std::string s = (j < p.names.size() && !p.names[j].empty()) ? p.names[j] : "x" + std::to_string(j);
        for (auto& ch : s)
            if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_')) ch = '_';
        return s;
    };
    auto terms = [&](const std::vector<double>& coeffs) {
        std::ostringstream ts;
        ts.precision(12);
        bool first = true;
        for (std::size_t j = 0; j < coeffs.size(); ++j) {
            const double a = coeffs[j];
            if (a == 0.0) continue;
            if (!first || a < 0) ts << (a < 0 ? " - " : " + ");
            if (first && a > 0) ts << " ";
            if (std::abs(a) != 1.0) ts << std::abs(a) << " ";
            ts << name(j);
            first = false;
        }
        if (first) ts << " 0 " << name(0);
        return ts.str();
    };

    os.precision(12);
    os << "Maximize\n obj:" << terms(p.objective) << "\nSubject To\n";
    for (std::size_t i = 0; i < p.constraints.size(); ++i) {
        const auto& c = p.constraints[i];
        const char* rel = c.relation == Relation::less_equal ? "<=" : c.relation == Relation::equal ? "=" : ">=";
        std::string label = c.name.empty() ? "c" + std::to_string(i) : c.name;
        for (auto& ch : label)
            if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_')) ch = '_';
        os << " " << label << ":" << terms(c.coeffs) << " " << rel << " " << c.rhs << "\n";
    }
    os << "Bounds\n";
    for (std::size_t j = 0; j < p.variable_count(); ++j) {
        os << " " << p.lower[j] << " <= " << name(j);
        if (std::isfinite(p.upper[j])) os << " <= " << p.upper[j];
        os << "\n";
    }
    os << "End\n";
}

inline std::string to_lp_format(const LpProblem& p) {
    std::ostringstream os;
    write_lp_format(os, p);
    return os.str();
}

}  // namespace mmpass
