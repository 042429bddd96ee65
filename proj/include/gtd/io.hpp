#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gtd/boundary.hpp"
#include "gtd/dynamics.hpp"
#include "gtd/signature.hpp"

namespace gtd {

// Compact JSON renderings of the core objects.  Field order is fixed so a
// run's output is byte-stable.
std::string to_json(const signature& s);      // {"parts":[...]}
std::string to_json(const gt_scheme& s);      // {"levels":[[...],...]}
std::string to_json(const omega_point& w);    // {"alpha_plus":[...],...}
std::string to_json(const event_record& e);   // {"t":...,"k":...,"i":...,"dir":...,"chain":...}

std::optional<signature> signature_from_json(const std::string& text);
std::optional<gt_scheme> scheme_from_json(const std::string& text);
std::optional<omega_point> omega_from_json(const std::string& text);

// RFC 4180: quotes a field when it contains a comma, quote, or line break;
// embedded quotes are doubled.
std::string csv_escape(const std::string& field);
// One CSV record terminated by CRLF.
std::string csv_row(const std::vector<std::string>& fields);

// Fixed shortest-round-trip rendering used wherever doubles enter reports.
std::string format_double(double x);

}  // namespace gtd
