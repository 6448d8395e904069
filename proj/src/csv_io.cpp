#include "candlecast/csv_io.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <system_error>

#include "candlecast/errors.hpp"

namespace candlecast {

namespace {

std::string trim(std::string s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        cells.push_back(trim(cell));
    }
    if (!line.empty() && line.back() == ',') {
        cells.emplace_back();
    }
    return cells;
}

double parse_price(const std::string& cell, std::size_t line_no) {
    double value = 0.0;
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end || cell.empty()) {
        throw DataError("line " + std::to_string(line_no) + ": not a number: '" + cell + "'");
    }
    return value;
}

}  // namespace

std::vector<RawBar> parse_ohlc_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!trim(line).empty()) {
            break;
        }
    }
    if (trim(line).empty()) {
        throw DataError("CSV input is empty");
    }
    const auto header = split(trim(line));
    static const std::array<const char*, 5> kExpected{"date", "open", "high", "low", "close"};
    if (header.size() < kExpected.size()) {
        throw DataError("CSV header must start with date,open,high,low,close");
    }
    for (std::size_t i = 0; i < kExpected.size(); ++i) {
        if (header[i] != kExpected[i]) {
            throw DataError("CSV header must start with date,open,high,low,close");
        }
    }

    std::vector<RawBar> bars;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        const auto cells = split(trim(line));
        if (cells.size() < 5) {
            throw DataError("line " + std::to_string(line_no) + ": expected 5 columns");
        }
        bars.push_back({cells[0], parse_price(cells[1], line_no), parse_price(cells[2], line_no),
                        parse_price(cells[3], line_no), parse_price(cells[4], line_no)});
    }
    return bars;
}

std::vector<RawBar> read_ohlc_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    return parse_ohlc_csv(in);
}

std::string format_double(double value) {
    std::array<char, 32> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), ptr);
}

void write_ohlc_csv(std::ostream& out, const OhlcSeries& series) {
    out << "date,open,high,low,close\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto& b = series.bars[i];
        const std::string label =
            i < series.labels.size() && !series.labels[i].empty() ? series.labels[i] : std::to_string(b.t);
        out << label << ',' << format_double(b.open) << ',' << format_double(b.high) << ','
            << format_double(b.low) << ',' << format_double(b.close) << '\n';
    }
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path(), ec);
        if (ec) {
            throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
        }
    }
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw IoError("cannot write " + tmp.string());
        }
        out << contents;
        out.flush();
        if (!out) {
            throw IoError("write failed for " + tmp.string());
        }
    }
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cannot rename into " + path.string());
    }
}

}  // namespace candlecast
