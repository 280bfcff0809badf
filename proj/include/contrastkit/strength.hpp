#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace contrastkit {

// Prompt-embedding norms (X) with hand-picked best edit strengths (Y) for
// one generative backend.
struct StrengthTrainingSet {
    std::vector<double> norms;
    std::vector<double> strengths;
    std::string backend_id;

    // Throws ValidationError when lengths differ, fewer than 2 points, a norm
    // is not positive, or a strength leaves [0, 1].
    void validate() const;
};

struct SvrHyperParams {
    double c_reg = 10.0;
    double epsilon_tube = 0.05;
    // Defaults to 1 / (2 * variance(X)).
    std::optional<double> gamma;
    // Stopping gap on the maximal violating pair.
    double tolerance = 1e-6;
    long max_iterations = 10'000'000;
};

// Fitted RBF epsilon-SVR mapping a prompt-embedding norm to a strength.
struct StrengthModel {
    std::vector<double> support_norms;
    std::vector<double> dual_coefs;
    double bias = 0.0;
    double gamma = 1.0;
    double c_reg = 10.0;
    double epsilon_tube = 0.05;
    std::string backend_id;

    // Kernel expansion before clamping.
    double decision(double norm) const noexcept;
};

// Full dual solution, one coefficient (alpha - alpha*) per training point.
struct SvrSolution {
    std::vector<double> coefs;
    double bias = 0.0;
    double gamma = 1.0;
    long iterations = 0;
};

double default_gamma(std::span<const double> norms) noexcept;

// SMO on the epsilon-SVR dual with second-order working-set selection.
SvrSolution solve_epsilon_svr(std::span<const double> x, std::span<const double> y, const SvrHyperParams& hyper);

StrengthModel fit_strength_model(const StrengthTrainingSet& data, const SvrHyperParams& hyper = {});

// clamp(decision(norm), 0, 1). Throws ValidationError for non-finite input.
double predict_strength(const StrengthModel& m, double norm);

std::string strength_model_to_json(const StrengthModel& m);
StrengthModel strength_model_from_json(const std::string& text);
StrengthModel load_strength_model(const std::filesystem::path& path);
void save_strength_model(const std::filesystem::path& path, const StrengthModel& m);
StrengthTrainingSet load_training_set(const std::filesystem::path& path);

}  // namespace contrastkit
