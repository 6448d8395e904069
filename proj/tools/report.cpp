#include "report.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "candlecast/csv_io.hpp"
#include "candlecast/errors.hpp"

namespace candlecast::cli {

namespace {

constexpr std::array<const char*, 4> kPriceKeys{"o", "h", "l", "c"};

bool is_backtest_document(const Json& j) {
    return j.is_object() && j.contains("tag") && j.contains("spec") && j.contains("horizons");
}

std::size_t q_of(const Json& doc) { return doc.at("spec").at("q").get<std::size_t>(); }
std::size_t m_of(const Json& doc) { return doc.at("spec").at("m").get<std::size_t>(); }

// The horizon-m block of a backtest with horizon m, or null.
const Json* final_horizon(const Json& doc) {
    const std::size_t m = m_of(doc);
    for (const auto& h : doc.at("horizons")) {
        if (h.at("horizon").get<std::size_t>() == m) {
            return &h;
        }
    }
    return nullptr;
}

std::vector<const Json*> sorted(const std::vector<Json>& docs) {
    std::vector<const Json*> out;
    for (const auto& d : docs) {
        out.push_back(&d);
    }
    std::sort(out.begin(), out.end(), [](const Json* a, const Json* b) {
        return std::pair(q_of(*a), m_of(*a)) < std::pair(q_of(*b), m_of(*b));
    });
    return out;
}

std::string cell(double value, bool percent) {
    std::ostringstream s;
    if (percent) {
        s << std::fixed << std::setprecision(2) << value << '%';
    } else {
        s << std::fixed << std::setprecision(3) << value;
    }
    return s.str();
}

}  // namespace

BacktestGroups load_backtests(const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) {
        throw DataError("backtest directory not found: " + dir.string());
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    BacktestGroups groups;
    for (const auto& path : files) {
        std::ifstream in(path);
        if (!in) {
            throw IoError("cannot read " + path.string());
        }
        const Json doc = Json::parse(in, nullptr, false);
        if (doc.is_discarded() || !is_backtest_document(doc)) {
            continue;
        }
        groups[doc.at("tag").get<std::string>()].push_back(doc);
    }
    if (groups.empty()) {
        throw DataError("no backtest outputs in " + dir.string());
    }
    return groups;
}

std::string render_metric_table(const std::string& tag, const std::vector<Json>& docs) {
    const auto ordered = sorted(docs);
    std::ostringstream out;
    out << "Forecast accuracy: " << tag << "\n";
    out << std::left << std::setw(12) << "Criterion" << std::setw(6) << "";
    for (const Json* d : ordered) {
        std::ostringstream head;
        head << "q=" << q_of(*d) << ",m=" << m_of(*d);
        out << std::right << std::setw(13) << head.str();
    }
    out << "\n";

    const auto row = [&](const std::string& metric, const std::string& price, bool percent) {
        out << std::left << std::setw(12) << metric << std::setw(6) << price;
        for (const Json* d : ordered) {
            const Json* h = final_horizon(*d);
            std::string text = "-";
            if (h != nullptr) {
                const Json& value = price.empty() ? h->at("proposed").at(metric)
                                                  : h->at("proposed").at(metric).at(price);
                text = cell(value.get<double>(), percent);
            }
            out << std::right << std::setw(13) << text;
        }
        out << "\n";
    };
    for (const char* metric : {"MAPE", "SD", "RMSE"}) {
        for (const char* p : kPriceKeys) {
            row(metric, p, std::string(metric) == "MAPE");
        }
    }
    row("RMSEH", "", false);
    row("AR", "", false);
    return out.str();
}

std::string render_comparison_table(const std::string& tag, const std::vector<Json>& docs) {
    std::ostringstream out;
    for (const Json* d : sorted(docs)) {
        const Json* h = final_horizon(*d);
        if (h == nullptr || h->at("tests").empty()) {
            continue;
        }
        out << "Proposed vs naive: " << tag << " (q=" << q_of(*d) << ", m=" << m_of(*d) << ")\n";
        out << std::left << std::setw(12) << "Criterion" << std::setw(6) << "" << std::right << std::setw(14)
            << "Proposed" << std::setw(14) << "Naive" << std::setw(12) << "p-value" << "\n";
        for (const auto& t : h->at("tests")) {
            const std::string metric = t.at("metric").get<std::string>();
            const bool percent = metric == "MAPE";
            std::string proposed = cell(t.at("proposed").get<double>(), percent);
            if (t.at("significant").get<bool>()) {
                proposed += "*";
            }
            std::ostringstream p;
            p << std::setprecision(3) << t.at("p_value").get<double>();
            out << std::left << std::setw(12) << metric << std::setw(6) << t.at("price").get<std::string>()
                << std::right << std::setw(14) << proposed << std::setw(14)
                << cell(t.at("naive").get<double>(), percent) << std::setw(12) << p.str() << "\n";
        }
        const auto& counts = d->at("model_counts");
        out << std::left << std::setw(18) << "Count of VAR" << counts.at("VAR").get<std::size_t>() << "\n";
        out << std::left << std::setw(18) << "Count of VEC" << counts.at("VEC").get<std::size_t>() << "\n";
        out << std::left << std::setw(18) << "Count of DIFF_VAR" << counts.at("DIFF_VAR").get<std::size_t>()
            << "\n";
        out << "(* one-sided paired t-test p < 0.01)\n\n";
    }
    return out.str();
}

std::string render_tidy_csv(const std::vector<Json>& docs) {
    std::ostringstream out;
    out << "q,m,price,metric,value\n";
    for (const Json* d : sorted(docs)) {
        const Json* h = final_horizon(*d);
        if (h == nullptr) {
            continue;
        }
        const auto& proposed = h->at("proposed");
        const auto prefix = std::to_string(q_of(*d)) + "," + std::to_string(m_of(*d)) + ",";
        for (const char* metric : {"MAPE", "SD", "RMSE"}) {
            for (const char* p : kPriceKeys) {
                out << prefix << p << ',' << metric << ',' << format_double(proposed.at(metric).at(p).get<double>())
                    << "\n";
            }
        }
        out << prefix << ",RMSEH," << format_double(proposed.at("RMSEH").get<double>()) << "\n";
        out << prefix << ",AR," << format_double(proposed.at("AR").get<double>()) << "\n";
    }
    return out.str();
}

}  // namespace candlecast::cli
