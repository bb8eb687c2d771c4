#include "dwlab/reports.hpp"

#include "dwlab/grid.hpp"

#include <sstream>

namespace dwlab {

std::string format_report_line(const CheckReport& r) {
    std::ostringstream s;
    s << r.name << ',' << (r.passed ? "true" : "false") << ',' << format_double(r.worst_value)
      << ',' << format_double(r.worst_t) << ',' << format_double(r.worst_x) << ',';
    if (r.empirical_constant) s << format_double(*r.empirical_constant);
    return s.str();
}

void write_reports_csv(std::span<const CheckReport> reports, const std::filesystem::path& path) {
    std::ostringstream s;
    s << "check,passed,worst_value,t,x,constant\n";
    for (const auto& r : reports) s << format_report_line(r) << '\n';
    write_file_atomic(path, s.str());
}

}  // namespace dwlab
