#include "nyts/metrics/report.hpp"

#include "nyts/exceptions.hpp"  // nyts::validation_error

#include "fmt/format.h"  // fmt::format
#include "json.hpp"      // nlohmann::json

#include <algorithm>  // std::max

namespace nyts::metrics {

metric_triple macro_average(const std::span<const metric_triple> per_class) {
    metric_triple avg;
    if (per_class.empty()) {
        return avg;
    }
    for (const metric_triple &m : per_class) {
        avg.precision += m.precision;
        avg.recall += m.recall;
        avg.f1 += m.f1;
    }
    const auto k = static_cast<double>(per_class.size());
    avg.precision /= k;
    avg.recall /= k;
    avg.f1 /= k;
    return avg;
}

metric_triple weighted_average(const std::span<const metric_triple> per_class, const std::span<const std::size_t> supports) {
    if (per_class.size() != supports.size()) {
        throw validation_error{ "weighted average needs one support per class" };
    }
    std::size_t total = 0;
    metric_triple avg;
    for (std::size_t k = 0; k < per_class.size(); ++k) {
        const auto w = static_cast<double>(supports[k]);
        avg.precision += w * per_class[k].precision;
        avg.recall += w * per_class[k].recall;
        avg.f1 += w * per_class[k].f1;
        total += supports[k];
    }
    if (total == 0) {
        throw validation_error{ "weighted average over zero support" };
    }
    const auto n = static_cast<double>(total);
    avg.precision /= n;
    avg.recall /= n;
    avg.f1 /= n;
    return avg;
}

class_report report(const confusion_matrix &cm) {
    class_report r;
    r.labels = cm.labels;
    r.total = cm.total();
    r.accuracy = accuracy(cm);
    std::vector<metric_triple> triples;
    std::vector<std::size_t> supports;
    for (const int label : cm.labels) {
        const class_metrics m = precision_recall_f1(cm, label);
        r.per_class.push_back(m);
        triples.push_back({ m.precision, m.recall, m.f1 });
        supports.push_back(m.support);
    }
    r.macro_avg = macro_average(triples);
    r.weighted_avg = weighted_average(triples, supports);
    return r;
}

class_report report(const std::span<const int> y_true, const std::span<const int> y_pred, const std::span<const int> labels) {
    return report(confusion(y_true, y_pred, labels));
}

std::string class_name(const int label) {
    switch (label) {
        case 1:
            return "Yes";
        case 0:
            return "No";
        default:
            return fmt::format("{}", label);
    }
}

std::string render_report(const class_report &report, const std::string_view title) {
    std::size_t width = 12;  // "Weighted Avg"
    for (const int label : report.labels) {
        width = std::max(width, class_name(label).size());
    }
    std::string out;
    if (!title.empty()) {
        out += fmt::format("{}\n", title);
    }
    out += fmt::format("{:<{}}  {:>9}  {:>6}  {:>8}  {:>5}\n", "", width, "Precision", "Recall", "F1-Score", "Cases");
    for (std::size_t k = report.labels.size(); k-- > 0;) {
        const class_metrics &m = report.per_class[k];
        out += fmt::format("{:<{}}  {:>9.2f}  {:>6.2f}  {:>8.2f}  {:>5}\n", class_name(report.labels[k]), width, m.precision, m.recall, m.f1, m.support);
    }
    const auto avg_line = [&](const std::string_view name, const metric_triple &t) {
        return fmt::format("{:<{}}  {:>9.2f}  {:>6.2f}  {:>8.2f}  {:>5}\n", name, width, t.precision, t.recall, t.f1, report.total);
    };
    out += avg_line("Macro Avg", report.macro_avg);
    out += avg_line("Weighted Avg", report.weighted_avg);
    out += fmt::format("{:<{}}  {:>9.4f}  {:>5}\n", "Accuracy", width, report.accuracy, report.total);
    return out;
}

std::string report_json(const class_report &report) {
    nlohmann::ordered_json classes = nlohmann::ordered_json::array();
    for (std::size_t k = 0; k < report.labels.size(); ++k) {
        const class_metrics &m = report.per_class[k];
        classes.push_back({
            { "label", report.labels[k] },
            { "name", class_name(report.labels[k]) },
            { "precision", m.precision },
            { "recall", m.recall },
            { "f1", m.f1 },
            { "support", m.support },
            { "zero_division", { { "precision", m.precision_zero_division }, { "recall", m.recall_zero_division }, { "f1", m.f1_zero_division } } },
        });
    }
    const auto triple = [](const metric_triple &t) {
        return nlohmann::ordered_json{ { "precision", t.precision }, { "recall", t.recall }, { "f1", t.f1 } };
    };
    const nlohmann::ordered_json doc{
        { "classes", classes },
        { "macro_avg", triple(report.macro_avg) },
        { "weighted_avg", triple(report.weighted_avg) },
        { "accuracy", report.accuracy },
        { "total", report.total },
    };
    return doc.dump(2) + "\n";
}

}  // namespace nyts::metrics
