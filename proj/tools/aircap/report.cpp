#include "report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>

#include "aircap/csv.hpp"

namespace aircap::cli {

namespace {

const std::map<std::string, std::string>& display_names() {
    static const std::map<std::string, std::string> m{
        {"CapacityDiscipline", "Capacity Discipline"},
        {"TalkEligible", "Talk-Eligible"},
        {"Monopoly", "Monopoly"},
        {"MissingReport", "Missing Report"},
        {"TalkEligibleMissingReport", "Talk-Eligible x Missing Report"},
        {"MonopolyMissingReport", "Monopoly x Missing Report"},
        {"CapacityDiscipline_2", "Capacity Discipline (k=2)"},
        {"CapacityDiscipline_3", "Capacity Discipline (k=3)"},
        {"CapacityDiscipline_4", "Capacity Discipline (k=4)"},
        {"CapacityDisciplineAllLegacy", "Capacity Discipline (All Legacy)"},
        {"CapacityDisciplineMixed", "Capacity Discipline (Mixed)"},
        {"OnlyJTalks", "Only J Talks"},
        {"MonopolyCapacityDiscipline", "Monopoly x Capacity Discipline"},
        {"CapacityDisciplineN1", "Capacity Discipline (N-1)"},
        {"CapacityDisciplineNotJ", "Capacity Discipline (Not J)"},
        {"CapacityDisciplinePre", "Capacity Discipline (Pre)"},
        {"CapacityDisciplinePost", "Capacity Discipline (Post)"},
        {"LeadCapacityDiscipline", "Lead Capacity Discipline"},
        {"FirstStageResidual", "First-Stage Residual"},
        {"LogMarketSeats", "Log Market Seats"},
        {"LogMarketSeatsCapacityDiscipline", "Log Market Seats x Capacity Discipline"},
        {"CapacityDisciplineLegacy", "Capacity Discipline (Legacy)"},
        {"CapacityDisciplineLcc", "Capacity Discipline (LCC)"},
        {"MonopolyMissing", "Monopoly x Missing Report"},
    };
    return m;
}

}  // namespace

std::string display_name(const std::string& term) {
    const auto it = display_names().find(term);
    if (it != display_names().end()) return it->second;
    if (term.rfind("HubDistance_", 0) == 0) return "Hub Distance (" + term.substr(12) + ")";
    return term;
}

std::string fmt_int(std::size_t v) { return std::to_string(v); }

std::string fmt_fixed(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string coef_table(const std::string& title, const std::vector<CoefRow>& rows,
                       const std::vector<std::pair<std::string, std::string>>& footer) {
    std::size_t label_w = title.size();
    for (const auto& r : rows) label_w = std::max(label_w, r.label.size());
    for (const auto& f : footer) label_w = std::max(label_w, f.first.size());
    const std::size_t val_w = 12;
    const std::size_t total = label_w + 2 + val_w;

    std::string out;
    auto line = [&] { out += std::string(total, '-') + "\n"; };
    auto pad_label = [&](const std::string& s) {
        return s + std::string(label_w + 2 - s.size(), ' ');
    };
    auto pad_value = [&](const std::string& s) {
        return s.size() >= val_w ? s : std::string(val_w - s.size(), ' ') + s;
    };

    out += title + "\n";
    line();
    for (const auto& r : rows) {
        out += pad_label(r.label) + pad_value(fmt_fixed(r.coef)) + "\n";
        out += pad_label("") + pad_value("(" + fmt_fixed(r.se) + ")") + "\n";
    }
    line();
    for (const auto& f : footer) out += pad_label(f.first) + pad_value(f.second) + "\n";
    return out;
}

std::vector<CoefRow> coef_rows(const RegressionResult& r) {
    std::vector<CoefRow> rows;
    rows.reserve(r.names.size());
    for (std::size_t i = 0; i < r.names.size(); ++i)
        rows.push_back({display_name(r.names[i]), r.beta[i], r.se[i]});
    return rows;
}

void write_estimates_csv(const std::filesystem::path& path, const RegressionResult& r) {
    csv::Writer w(path);
    w.row("term", "estimate", "std_error", "t_stat", "semi_elasticity_pct");
    for (std::size_t i = 0; i < r.names.size(); ++i) {
        w.field(r.names[i]);
        w.field(r.beta[i]);
        w.field(r.se[i]);
        w.field(r.se[i] > 0.0 ? r.beta[i] / r.se[i] : 0.0);
        if (r.semi_elasticity[i])
            w.field(*r.semi_elasticity[i]);
        else
            w.field(std::string());
        w.end_row();
    }
}

void write_estimates_csv(const std::filesystem::path& path, const PoissonFEResult& r) {
    csv::Writer w(path);
    w.row("term", "estimate", "std_error", "t_stat");
    for (std::size_t i = 0; i < r.names.size(); ++i) {
        w.field(r.names[i]);
        w.field(r.beta[i]);
        w.field(r.se[i]);
        w.field(r.se[i] > 0.0 ? r.beta[i] / r.se[i] : 0.0);
        w.end_row();
    }
}

void write_summary_csv(const std::filesystem::path& path,
                       const std::vector<std::pair<std::string, std::string>>& entries) {
    csv::Writer w(path);
    w.row("key", "value");
    for (const auto& e : entries) w.row(e.first, e.second);
}

void emit_table(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    std::cout << text;
}

}  // namespace aircap::cli
