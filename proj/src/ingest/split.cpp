#include "nyts/ingest/split.hpp"

#include "nyts/exceptions.hpp"  // nyts::input_error
#include "nyts/random.hpp"      // nyts::rng

#include "fmt/format.h"  // fmt::format

#include <algorithm>  // std::sort
#include <cmath>      // std::lround, std::floor
#include <map>        // std::map

namespace nyts::ingest {

split_indices split_positions(const std::span<const int> labels, const split_spec &spec) {
    const std::size_t n = labels.size();
    if (n == 0) {
        throw input_error{ "cannot split an empty dataset" };
    }
    if (!(spec.test_fraction > 0.0 && spec.test_fraction < 1.0)) {
        throw input_error{ fmt::format("test fraction must lie in (0, 1), got {}", spec.test_fraction) };
    }
    const auto test_total = static_cast<std::size_t>(std::lround(spec.test_fraction * static_cast<double>(n)));

    rng gen{ spec.seed };
    split_indices out;
    if (!spec.stratified) {
        std::vector<std::size_t> order(n);
        for (std::size_t i = 0; i < n; ++i) {
            order[i] = i;
        }
        gen.shuffle(order);
        out.test.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(test_total));
        out.train.assign(order.begin() + static_cast<std::ptrdiff_t>(test_total), order.end());
    } else {
        std::map<int, std::vector<std::size_t>> by_class;
        for (std::size_t i = 0; i < n; ++i) {
            by_class[labels[i]].push_back(i);
        }
        struct share {
            int label;
            std::size_t take;
            double remainder;
        };
        std::vector<share> shares;
        std::size_t assigned = 0;
        for (const auto &[label, members] : by_class) {
            if (members.size() < 2) {
                throw input_error{ fmt::format("stratified split: class {} has {} row(s), needs at least 2", label, members.size()) };
            }
            const double ideal = spec.test_fraction * static_cast<double>(members.size());
            const auto base = static_cast<std::size_t>(std::floor(ideal));
            shares.push_back({ label, base, ideal - static_cast<double>(base) });
            assigned += base;
        }
        std::vector<std::size_t> order(shares.size());
        for (std::size_t i = 0; i < order.size(); ++i) {
            order[i] = i;
        }
        std::stable_sort(order.begin(), order.end(), [&](const std::size_t a, const std::size_t b) { return shares[a].remainder > shares[b].remainder; });
        for (std::size_t k = 0; assigned < test_total && k < order.size(); ++k) {
            ++shares[order[k]].take;
            ++assigned;
        }
        for (const share &s : shares) {
            std::vector<std::size_t> members = by_class[s.label];
            gen.shuffle(members);
            out.test.insert(out.test.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(s.take));
            out.train.insert(out.train.end(), members.begin() + static_cast<std::ptrdiff_t>(s.take), members.end());
        }
    }
    std::sort(out.train.begin(), out.train.end());
    std::sort(out.test.begin(), out.test.end());
    return out;
}

std::pair<dataset, dataset> train_test_split(const dataset &ds, const split_spec &spec) {
    const split_indices idx = split_positions(ds.labels, spec);
    return { ds.subset(idx.train), ds.subset(idx.test) };
}

}  // namespace nyts::ingest
