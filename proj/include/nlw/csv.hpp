#pragma once

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace nlw {

/// Deterministic CSV emission: fixed %.17g formatting, LF line endings,
/// no locale dependence. Identical inputs produce identical bytes.
class CsvWriter {
public:
    using Cell = std::variant<long long, double, std::string>;

    CsvWriter(const std::string& path, const std::vector<std::string>& header)
        : out_(path, std::ios::binary) {
        if (!out_) throw std::runtime_error("CsvWriter: cannot open " + path);
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (i) out_ << ',';
            out_ << header[i];
        }
        out_ << '\n';
    }

    void row(const std::vector<Cell>& cells) {
        char buf[64];
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ',';
            if (std::holds_alternative<long long>(cells[i])) {
                std::snprintf(buf, sizeof(buf), "%lld", std::get<long long>(cells[i]));
                out_ << buf;
            } else if (std::holds_alternative<double>(cells[i])) {
                std::snprintf(buf, sizeof(buf), "%.17g", std::get<double>(cells[i]));
                out_ << buf;
            } else {
                out_ << std::get<std::string>(cells[i]);
            }
        }
        out_ << '\n';
    }

private:
    std::ofstream out_;
};

}  // namespace nlw
