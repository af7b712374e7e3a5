#include "nyts/metrics/confusion.hpp"

#include "nyts/exceptions.hpp"  // nyts::validation_error

#include "fmt/format.h"  // fmt::format

#include <algorithm>  // std::lower_bound, std::sort, std::unique
#include <numeric>    // std::accumulate

namespace nyts::metrics {

std::size_t confusion_matrix::index_of(const int label) const {
    const auto it = std::lower_bound(labels.begin(), labels.end(), label);
    if (it == labels.end() || *it != label) {
        throw validation_error{ fmt::format("label {} is not in the class set", label) };
    }
    return static_cast<std::size_t>(it - labels.begin());
}

std::size_t confusion_matrix::total() const {
    return std::accumulate(counts.begin(), counts.end(), std::size_t{ 0 });
}

std::size_t confusion_matrix::trace() const {
    std::size_t t = 0;
    for (std::size_t k = 0; k < labels.size(); ++k) {
        t += at(k, k);
    }
    return t;
}

confusion_matrix confusion(const std::span<const int> y_true, const std::span<const int> y_pred, const std::span<const int> labels) {
    if (y_true.size() != y_pred.size()) {
        throw validation_error{ fmt::format("y_true has {} entries but y_pred has {}", y_true.size(), y_pred.size()) };
    }
    if (y_true.empty()) {
        throw validation_error{ "cannot build a confusion matrix from zero examples" };
    }
    confusion_matrix cm;
    if (labels.empty()) {
        cm.labels.assign(y_true.begin(), y_true.end());
        cm.labels.insert(cm.labels.end(), y_pred.begin(), y_pred.end());
    } else {
        cm.labels.assign(labels.begin(), labels.end());
    }
    std::sort(cm.labels.begin(), cm.labels.end());
    cm.labels.erase(std::unique(cm.labels.begin(), cm.labels.end()), cm.labels.end());

    const std::size_t k = cm.labels.size();
    cm.counts.assign(k * k, 0);
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        const std::size_t observed = cm.index_of(y_true[i]);
        const std::size_t predicted = cm.index_of(y_pred[i]);
        ++cm.counts[predicted * k + observed];
    }
    return cm;
}

double accuracy(const confusion_matrix &cm) {
    const std::size_t total = cm.total();
    if (total == 0) {
        throw validation_error{ "accuracy of an empty confusion matrix is undefined" };
    }
    return static_cast<double>(cm.trace()) / static_cast<double>(total);
}

double f1_score(const double precision, const double recall) {
    const double sum = precision + recall;
    return sum > 0.0 ? 2.0 * precision * recall / sum : 0.0;
}

class_metrics precision_recall_f1(const confusion_matrix &cm, const int label) {
    const std::size_t c = cm.index_of(label);
    std::size_t predicted = 0;  // row sum: TP + FP
    std::size_t observed = 0;   // column sum: TP + FN
    for (std::size_t k = 0; k < cm.class_count(); ++k) {
        predicted += cm.at(c, k);
        observed += cm.at(k, c);
    }
    const std::size_t tp = cm.at(c, c);

    class_metrics m;
    m.support = observed;
    if (predicted == 0) {
        m.precision_zero_division = true;
    } else {
        m.precision = static_cast<double>(tp) / static_cast<double>(predicted);
    }
    if (observed == 0) {
        m.recall_zero_division = true;
    } else {
        m.recall = static_cast<double>(tp) / static_cast<double>(observed);
    }
    if (m.precision + m.recall == 0.0) {
        m.f1_zero_division = true;
    } else {
        m.f1 = f1_score(m.precision, m.recall);
    }
    return m;
}

}  // namespace nyts::metrics
