#include "contrastkit/strength.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "contrastkit/error.hpp"

namespace contrastkit {

using json = nlohmann::json;

namespace {

constexpr double kTau = 1e-12;

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Dual problem over 2l variables: the first l carry alpha (sign +1), the last
// l carry alpha* (sign -1).
class SvrSmo {
public:
    SvrSmo(std::span<const double> x, std::span<const double> y, double c, double eps, double gamma)
        : l_(x.size()), n_(2 * x.size()), c_(c), kernel_(l_ * l_), alpha_(n_, 0.0), grad_(n_), sign_(n_) {
        for (std::size_t i = 0; i < l_; ++i)
            for (std::size_t j = 0; j < l_; ++j) {
                const double d = x[i] - x[j];
                kernel_[i * l_ + j] = std::exp(-gamma * d * d);
            }
        for (std::size_t t = 0; t < l_; ++t) {
            sign_[t] = 1;
            sign_[t + l_] = -1;
            grad_[t] = eps - y[t];
            grad_[t + l_] = eps + y[t];
        }
    }

    long solve(double tolerance, long max_iterations) {
        long iter = 0;
        while (iter < max_iterations) {
            std::size_t i = 0, j = 0;
            if (!select_working_set(tolerance, i, j)) break;
            ++iter;
            update_pair(i, j);
        }
        return iter;
    }

    double bias() const {
        double ub = std::numeric_limits<double>::infinity();
        double lb = -std::numeric_limits<double>::infinity();
        double sum_free = 0.0;
        int free = 0;
        for (std::size_t t = 0; t < n_; ++t) {
            const double yg = sign_[t] * grad_[t];
            if (at_upper(t)) {
                if (sign_[t] == -1) ub = std::min(ub, yg);
                else lb = std::max(lb, yg);
            } else if (at_lower(t)) {
                if (sign_[t] == 1) ub = std::min(ub, yg);
                else lb = std::max(lb, yg);
            } else {
                ++free;
                sum_free += yg;
            }
        }
        const double rho = free > 0 ? sum_free / free : (ub + lb) / 2.0;
        return -rho;
    }

    std::vector<double> coefs() const {
        std::vector<double> out(l_);
        for (std::size_t i = 0; i < l_; ++i) out[i] = alpha_[i] - alpha_[i + l_];
        return out;
    }

private:
    double q(std::size_t s, std::size_t t) const {
        return sign_[s] * sign_[t] * kernel_[(s % l_) * l_ + (t % l_)];
    }
    bool at_upper(std::size_t t) const { return alpha_[t] >= c_; }
    bool at_lower(std::size_t t) const { return alpha_[t] <= 0.0; }

    bool select_working_set(double tolerance, std::size_t& out_i, std::size_t& out_j) const {
        double gmax = -std::numeric_limits<double>::infinity();
        double gmax2 = -std::numeric_limits<double>::infinity();
        std::ptrdiff_t gmax_idx = -1;
        for (std::size_t t = 0; t < n_; ++t) {
            if (sign_[t] == 1) {
                if (!at_upper(t) && -grad_[t] >= gmax) {
                    gmax = -grad_[t];
                    gmax_idx = static_cast<std::ptrdiff_t>(t);
                }
            } else if (!at_lower(t) && grad_[t] >= gmax) {
                gmax = grad_[t];
                gmax_idx = static_cast<std::ptrdiff_t>(t);
            }
        }
        if (gmax_idx < 0) return false;
        const auto i = static_cast<std::size_t>(gmax_idx);

        std::ptrdiff_t gmin_idx = -1;
        double obj_min = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < n_; ++j) {
            if (sign_[j] == 1) {
                if (at_lower(j)) continue;
                const double grad_diff = gmax + grad_[j];
                gmax2 = std::max(gmax2, grad_[j]);
                if (grad_diff > 0.0) {
                    double quad = q(i, i) + q(j, j) - 2.0 * sign_[i] * q(i, j);
                    if (quad <= 0.0) quad = kTau;
                    const double obj = -(grad_diff * grad_diff) / quad;
                    if (obj <= obj_min) {
                        gmin_idx = static_cast<std::ptrdiff_t>(j);
                        obj_min = obj;
                    }
                }
            } else {
                if (at_upper(j)) continue;
                const double grad_diff = gmax - grad_[j];
                gmax2 = std::max(gmax2, -grad_[j]);
                if (grad_diff > 0.0) {
                    double quad = q(i, i) + q(j, j) + 2.0 * sign_[i] * q(i, j);
                    if (quad <= 0.0) quad = kTau;
                    const double obj = -(grad_diff * grad_diff) / quad;
                    if (obj <= obj_min) {
                        gmin_idx = static_cast<std::ptrdiff_t>(j);
                        obj_min = obj;
                    }
                }
            }
        }
        if (gmax + gmax2 < tolerance || gmin_idx < 0) return false;
        out_i = i;
        out_j = static_cast<std::size_t>(gmin_idx);
        return true;
    }

    void update_pair(std::size_t i, std::size_t j) {
        const double old_ai = alpha_[i];
        const double old_aj = alpha_[j];
        double& ai = alpha_[i];
        double& aj = alpha_[j];
        const double qij = q(i, j);
        if (sign_[i] != sign_[j]) {
            double quad = q(i, i) + q(j, j) + 2.0 * qij;
            if (quad <= 0.0) quad = kTau;
            const double delta = (-grad_[i] - grad_[j]) / quad;
            const double diff = ai - aj;
            ai += delta;
            aj += delta;
            if (diff > 0.0) {
                if (aj < 0.0) { aj = 0.0; ai = diff; }
            } else if (ai < 0.0) {
                ai = 0.0;
                aj = -diff;
            }
            if (diff > 0.0) {
                if (ai > c_) { ai = c_; aj = c_ - diff; }
            } else if (aj > c_) {
                aj = c_;
                ai = c_ + diff;
            }
        } else {
            double quad = q(i, i) + q(j, j) - 2.0 * qij;
            if (quad <= 0.0) quad = kTau;
            const double delta = (grad_[i] - grad_[j]) / quad;
            const double sum = ai + aj;
            ai -= delta;
            aj += delta;
            if (sum > c_) {
                if (ai > c_) { ai = c_; aj = sum - c_; }
            } else if (aj < 0.0) {
                aj = 0.0;
                ai = sum;
            }
            if (sum > c_) {
                if (aj > c_) { aj = c_; ai = sum - c_; }
            } else if (ai < 0.0) {
                ai = 0.0;
                aj = sum;
            }
        }
        const double dai = ai - old_ai;
        const double daj = aj - old_aj;
        for (std::size_t t = 0; t < n_; ++t) grad_[t] += q(t, i) * dai + q(t, j) * daj;
    }

    std::size_t l_;
    std::size_t n_;
    double c_;
    std::vector<double> kernel_;
    std::vector<double> alpha_;
    std::vector<double> grad_;
    std::vector<int> sign_;
};

}  // namespace

void StrengthTrainingSet::validate() const {
    if (norms.size() != strengths.size()) throw ValidationError("training set: norms and strengths differ in length");
    if (norms.size() < 2) throw ValidationError("training set: at least 2 points are required");
    for (double x : norms)
        if (!(std::isfinite(x) && x > 0.0)) throw ValidationError("training set: norms must be positive and finite");
    for (double y : strengths)
        if (!(y >= 0.0 && y <= 1.0)) throw ValidationError("training set: strengths must lie in [0, 1]");
}

double StrengthModel::decision(double norm) const noexcept {
    double acc = bias;
    for (std::size_t i = 0; i < support_norms.size(); ++i) {
        const double d = norm - support_norms[i];
        acc += dual_coefs[i] * std::exp(-gamma * d * d);
    }
    return acc;
}

double default_gamma(std::span<const double> norms) noexcept {
    if (norms.empty()) return 1.0;
    double mean = 0.0;
    for (double x : norms) mean += x;
    mean /= static_cast<double>(norms.size());
    double var = 0.0;
    for (double x : norms) var += (x - mean) * (x - mean);
    var /= static_cast<double>(norms.size());
    return var > 0.0 ? 1.0 / (2.0 * var) : 1.0;
}

SvrSolution solve_epsilon_svr(std::span<const double> x, std::span<const double> y, const SvrHyperParams& hyper) {
    if (x.size() != y.size() || x.size() < 2) throw ValidationError("SVR needs at least 2 paired samples");
    if (!(hyper.c_reg > 0.0) || !(hyper.epsilon_tube >= 0.0)) throw ValidationError("SVR: c_reg must be positive and epsilon non-negative");
    const double gamma = hyper.gamma.value_or(default_gamma(x));
    if (!(gamma > 0.0)) throw ValidationError("SVR: gamma must be positive");
    SvrSmo smo(x, y, hyper.c_reg, hyper.epsilon_tube, gamma);
    SvrSolution sol;
    sol.iterations = smo.solve(hyper.tolerance, hyper.max_iterations);
    sol.coefs = smo.coefs();
    sol.bias = smo.bias();
    sol.gamma = gamma;
    return sol;
}

StrengthModel fit_strength_model(const StrengthTrainingSet& data, const SvrHyperParams& hyper) {
    data.validate();
    const SvrSolution sol = solve_epsilon_svr(data.norms, data.strengths, hyper);
    StrengthModel m;
    for (std::size_t i = 0; i < sol.coefs.size(); ++i) {
        if (sol.coefs[i] != 0.0) {
            m.support_norms.push_back(data.norms[i]);
            m.dual_coefs.push_back(sol.coefs[i]);
        }
    }
    m.bias = sol.bias;
    m.gamma = sol.gamma;
    m.c_reg = hyper.c_reg;
    m.epsilon_tube = hyper.epsilon_tube;
    m.backend_id = data.backend_id;
    return m;
}

double predict_strength(const StrengthModel& m, double norm) {
    if (!std::isfinite(norm)) throw ValidationError("strength prediction needs a finite norm");
    return std::clamp(m.decision(norm), 0.0, 1.0);
}

std::string strength_model_to_json(const StrengthModel& m) {
    const json j = {
        {"backend_id", m.backend_id}, {"support_norms", m.support_norms}, {"dual_coefs", m.dual_coefs},
        {"bias", m.bias},             {"gamma", m.gamma},                 {"c_reg", m.c_reg},
        {"epsilon_tube", m.epsilon_tube},
    };
    return j.dump(2) + "\n";
}

StrengthModel strength_model_from_json(const std::string& text) {
    StrengthModel m;
    try {
        const json j = json::parse(text);
        m.backend_id = j.at("backend_id").get<std::string>();
        m.support_norms = j.at("support_norms").get<std::vector<double>>();
        m.dual_coefs = j.at("dual_coefs").get<std::vector<double>>();
        m.bias = j.at("bias").get<double>();
        m.gamma = j.at("gamma").get<double>();
        m.c_reg = j.at("c_reg").get<double>();
        m.epsilon_tube = j.at("epsilon_tube").get<double>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("strength model: ") + e.what());
    }
    if (m.support_norms.size() != m.dual_coefs.size())
        throw ConfigError("strength model: support_norms and dual_coefs differ in length");
    if (!(m.gamma > 0.0) || !(m.c_reg > 0.0)) throw ConfigError("strength model: gamma and c_reg must be positive");
    return m;
}

StrengthModel load_strength_model(const std::filesystem::path& path) {
    return strength_model_from_json(read_file(path));
}

void save_strength_model(const std::filesystem::path& path, const StrengthModel& m) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << strength_model_to_json(m);
}

StrengthTrainingSet load_training_set(const std::filesystem::path& path) {
    StrengthTrainingSet data;
    try {
        const json j = json::parse(read_file(path));
        data.norms = j.at("norms").get<std::vector<double>>();
        data.strengths = j.at("strengths").get<std::vector<double>>();
        data.backend_id = j.at("backend_id").get<std::string>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("training set: ") + e.what());
    }
    data.validate();
    return data;
}

}  // namespace contrastkit
