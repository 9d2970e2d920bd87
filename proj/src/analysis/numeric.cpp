#include "qcs/analysis/numeric.hpp"

#include "qcs/error.hpp"

namespace qcs::analysis {

LogFactorialTable::LogFactorialTable(int max_n) {
    if (max_n < 0) {
        throw InputError("LogFactorialTable: negative size");
    }
    table_.resize(static_cast<std::size_t>(max_n) + 1);
    table_[0] = 0.0;
    KahanSum acc;
    for (int i = 1; i <= max_n; ++i) {
        acc.add(std::log(static_cast<double>(i)));
        table_[static_cast<std::size_t>(i)] = acc.value();
    }
}

}  // namespace qcs::analysis
