#pragma once

#include <string>

#include <json.hpp>

#include "nak/element.hpp"

namespace nak {

using Json = nlohmann::ordered_json;

// Canonical text form: Qp{p=5; v=-1; digits=1,2,3; prec=3} or
// Fpt{p=2; v=0; digits=1,0,1; prec=3}. prec counts digits, so the absolute
// precision is v + prec. The zero-to-precision sentinel prints as
// Qp{p=5; zero; prec=N} with N the absolute precision.
std::string format_elem(const Elem& x);
Elem parse_elem(const std::string& text);

Json elem_to_json(const Elem& x);
Elem elem_from_json(const Json& j);

Json rational_to_json(const Rational& r);

std::string format_disk(const Disk& d);
Json disk_to_json(const Disk& d);

}  // namespace nak
