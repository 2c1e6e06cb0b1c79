#pragma once

#include <string>
#include <vector>

#include "qgan/qsim.hpp"

namespace qgan::svg {

// Side-by-side bar chart of two distributions over the integer labels.
void write_histogram(const std::string& path, const qsim::Pmf& target,
                     const qsim::Pmf& generated, const std::string& title);

// Log-scale trace of a positive series (relative entropy over epochs).
void write_curve(const std::string& path, const std::vector<double>& values,
                 const std::string& title);

} // namespace qgan::svg
