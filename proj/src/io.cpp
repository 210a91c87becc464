#include "nak/io.hpp"

#include <cctype>
#include <sstream>

namespace nak {

namespace {

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

long parse_long(const std::string& s) {
  try {
    size_t pos = 0;
    long r = std::stol(s, &pos);
    require(pos == s.size(), errc::invalid_input, "trailing characters in integer '" + s + "'");
    return r;
  } catch (const error&) {
    throw;
  } catch (const std::exception&) {
    fail(errc::invalid_input, "bad integer '" + s + "'");
  }
}

}  // namespace

std::string format_elem(const Elem& x) {
  std::ostringstream os;
  os << (x.field.is_char_p() ? "Fpt{" : "Qp{") << "p=" << x.field.p << "; ";
  if (x.zero) {
    os << "zero; prec=" << x.abs_prec << "}";
    return os.str();
  }
  os << "v=" << x.v << "; digits=";
  for (size_t i = 0; i < x.d.size(); ++i) {
    if (i) os << ",";
    os << x.d[i];
  }
  os << "; prec=" << x.rel_prec() << "}";
  return os.str();
}

Elem parse_elem(const std::string& text) {
  std::string s = trim(text);
  bool char_p;
  if (s.rfind("Qp{", 0) == 0) {
    char_p = false;
    s = s.substr(3);
  } else if (s.rfind("Fpt{", 0) == 0) {
    char_p = true;
    s = s.substr(4);
  } else {
    fail(errc::invalid_input, "element must start with Qp{ or Fpt{");
  }
  require(!s.empty() && s.back() == '}', errc::invalid_input, "missing closing brace");
  s.pop_back();

  long p = -1, v = 0, prec = -1;
  bool have_v = false, is_zero = false, have_digits = false;
  std::vector<uint32_t> digits;

  std::stringstream parts(s);
  std::string part;
  while (std::getline(parts, part, ';')) {
    part = trim(part);
    if (part.empty()) continue;
    if (part == "zero") {
      is_zero = true;
      continue;
    }
    size_t eq = part.find('=');
    require(eq != std::string::npos, errc::invalid_input, "expected key=value, got '" + part + "'");
    std::string key = trim(part.substr(0, eq));
    std::string val = trim(part.substr(eq + 1));
    if (key == "p") {
      p = parse_long(val);
    } else if (key == "v") {
      v = parse_long(val);
      have_v = true;
    } else if (key == "prec") {
      prec = parse_long(val);
    } else if (key == "digits") {
      have_digits = true;
      std::stringstream ds(val);
      std::string tok;
      while (std::getline(ds, tok, ',')) {
        tok = trim(tok);
        if (tok.empty()) continue;
        long dg = parse_long(tok);
        require(dg >= 0, errc::invalid_input, "negative digit");
        digits.push_back(static_cast<uint32_t>(dg));
      }
    } else {
      fail(errc::invalid_input, "unknown key '" + key + "'");
    }
  }

  require(p >= 2, errc::invalid_input, "missing or bad p");
  FieldSpec fs = char_p ? field_Fpt(p) : field_Qp(p);
  require(prec >= 0, errc::invalid_input, "missing prec");
  if (is_zero) {
    require(!have_v && !have_digits, errc::invalid_input, "zero form carries no v or digits");
    return make_zero(fs, prec);
  }
  require(have_v && have_digits, errc::invalid_input, "missing v or digits");
  require(static_cast<long>(digits.size()) == prec, errc::invalid_input,
          "prec must equal the digit count");
  require(!digits.empty() && digits.front() != 0, errc::invalid_input,
          "leading digit must be nonzero");
  for (uint32_t dg : digits)
    require(dg < static_cast<uint32_t>(p), errc::invalid_input, "digit out of range");
  return make_elem(fs, v, std::move(digits));
}

Json elem_to_json(const Elem& x) {
  Json j;
  j["char"] = x.field.characteristic;
  j["p"] = x.field.p;
  if (x.zero)
    j["v"] = "inf";
  else
    j["v"] = x.v;
  j["digits"] = x.d;
  j["abs_prec"] = x.abs_prec;
  return j;
}

Elem elem_from_json(const Json& j) {
  require(j.contains("char") && j.contains("p") && j.contains("v") && j.contains("digits") &&
              j.contains("abs_prec"),
          errc::invalid_input, "element json missing a field");
  long ch = j["char"].get<long>();
  long p = j["p"].get<long>();
  FieldSpec fs = ch == 0 ? field_Qp(p) : field_Fpt(p);
  require(ch == fs.characteristic, errc::invalid_input, "characteristic must be 0 or p");
  long abs_prec = j["abs_prec"].get<long>();
  if (j["v"].is_string()) {
    require(j["v"].get<std::string>() == "inf", errc::invalid_input, "bad valuation");
    require(j["digits"].empty(), errc::invalid_input, "zero element carries no digits");
    return make_zero(fs, abs_prec);
  }
  long v = j["v"].get<long>();
  std::vector<uint32_t> digits;
  for (const auto& dj : j["digits"]) {
    long dg = dj.get<long>();
    require(dg >= 0 && dg < p, errc::invalid_input, "digit out of range");
    digits.push_back(static_cast<uint32_t>(dg));
  }
  require(!digits.empty() && digits.front() != 0, errc::invalid_input,
          "leading digit must be nonzero");
  require(v + static_cast<long>(digits.size()) == abs_prec, errc::invalid_input,
          "abs_prec inconsistent with v and digit count");
  return make_elem(fs, v, std::move(digits));
}

Json rational_to_json(const Rational& r) {
  Json j;
  j["num"] = r.get_num().get_str();
  j["den"] = r.get_den().get_str();
  j["dec"] = rat_shadow(r);
  return j;
}

std::string format_disk(const Disk& d) {
  std::ostringstream os;
  os << "D(" << format_elem(d.center) << ", m=" << d.radius_exp << ")";
  return os.str();
}

Json disk_to_json(const Disk& d) {
  Json j;
  j["center"] = elem_to_json(d.center);
  j["radius_exp"] = d.radius_exp;
  return j;
}

}  // namespace nak
