#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ponzi {

class LengthMismatch : public std::invalid_argument {
public:
    LengthMismatch() : std::invalid_argument("predictions and labels differ in length") {}
};

struct ConfusionMatrix {
    long long tp = 0, fp = 0, fn = 0, tn = 0;

    long long total() const { return tp + fp + fn + tn; }
};

// Zero denominators yield an empty optional rather than 0 or NaN.
struct Metrics {
    std::optional<double> precision, recall, f1, accuracy;
};

// Positive class = 1 (ponzi).
ConfusionMatrix confusion(const std::vector<int>& predictions, const std::vector<int>& labels);

Metrics metrics(const ConfusionMatrix& cm);

// Report file contents: rates scaled x100 and rounded to one decimal, raw
// counts included, undefined metrics serialized as null. JSON, sorted keys.
std::string metrics_report_json(const ConfusionMatrix& cm);

}  // namespace ponzi
