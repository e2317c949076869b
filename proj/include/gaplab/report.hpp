#pragma once

#include <string>
#include <vector>

namespace gaplab::report {

// fixed formatting so identical runs emit identical bytes
std::string fmt_double(double v);
std::string csv_field(const std::string& s);
std::string csv_table(const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows);

}  // namespace gaplab::report
