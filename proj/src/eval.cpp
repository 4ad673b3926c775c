#include "ponzi/eval.hpp"

#include <cmath>
#include <sstream>

namespace ponzi {

ConfusionMatrix confusion(const std::vector<int>& predictions, const std::vector<int>& labels) {
    if (predictions.size() != labels.size()) throw LengthMismatch();
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        if (labels[i] == 1) {
            (predictions[i] == 1 ? cm.tp : cm.fn)++;
        } else {
            (predictions[i] == 1 ? cm.fp : cm.tn)++;
        }
    }
    return cm;
}

Metrics metrics(const ConfusionMatrix& cm) {
    Metrics m;
    if (cm.tp + cm.fp > 0)
        m.precision = static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fp);
    if (cm.tp + cm.fn > 0)
        m.recall = static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fn);
    if (m.precision && m.recall && *m.precision + *m.recall > 0.0)
        m.f1 = 2.0 * (*m.precision * *m.recall) / (*m.precision + *m.recall);
    if (cm.total() > 0)
        m.accuracy = static_cast<double>(cm.tp + cm.tn) / static_cast<double>(cm.total());
    return m;
}

namespace {

// x100, one decimal, or "null" when undefined.
std::string scaled_or_null(const std::optional<double>& v) {
    if (!v) return "null";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1f", *v * 100.0);
    return buf;
}

}  // namespace

std::string metrics_report_json(const ConfusionMatrix& cm) {
    Metrics m = metrics(cm);
    std::ostringstream out;
    out << "{\n";
    out << "  \"accuracy\": " << scaled_or_null(m.accuracy) << ",\n";
    out << "  \"f1\": " << scaled_or_null(m.f1) << ",\n";
    out << "  \"fn\": " << cm.fn << ",\n";
    out << "  \"fp\": " << cm.fp << ",\n";
    out << "  \"precision\": " << scaled_or_null(m.precision) << ",\n";
    out << "  \"recall\": " << scaled_or_null(m.recall) << ",\n";
    out << "  \"tn\": " << cm.tn << ",\n";
    out << "  \"tp\": " << cm.tp << "\n";
    out << "}\n";
    return out.str();
}

}  // namespace ponzi
