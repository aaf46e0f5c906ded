#include "radlabel/deid.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "jsonl.hpp"
#include "radlabel/embedded_data.hpp"
#include "radlabel/error.hpp"
#include "radlabel/text.hpp"

namespace radlabel::deid {

using detail::json;

namespace {

constexpr std::array<std::string_view, 12> kMonthNames = {
    "January", "February", "March",     "April",   "May",      "June",
    "July",    "August",   "September", "October", "November", "December"};

std::string upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

std::string collapse_spaces(std::string_view s) {
  std::string out;
  bool pending = false;
  for (char c : text::trim(s)) {
    if (text::is_space(c)) {
      pending = true;
      continue;
    }
    if (pending && !out.empty()) out.push_back(' ');
    pending = false;
    out.push_back(c);
  }
  return out;
}

std::string digits_only(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c >= '0' && c <= '9') out.push_back(c);
  }
  return out;
}

int to_int(std::string_view s) {
  int v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return -1;
    v = v * 10 + (c - '0');
    if (v > 100000) return -1;
  }
  return s.empty() ? -1 : v;
}

int month_from_name(std::string_view name) {
  const std::string lower = text::to_lower(name);
  for (std::size_t i = 0; i < kMonthNames.size(); ++i) {
    const std::string full = text::to_lower(kMonthNames[i]);
    if (lower == full || (lower.size() >= 3 && full.starts_with(lower))) {
      return static_cast<int>(i) + 1;
    }
  }
  return -1;
}

bool valid_date(int y, int m, int d) {
  if (y < 1800 || y > 2199 || m < 1 || m > 12 || d < 1) return false;
  static constexpr int kDays[] = {31, 29, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  return d <= kDays[m - 1];
}

std::optional<Canonical> date_canonical(int y, int m, int d) {
  if (!valid_date(y, m, d)) return std::nullopt;
  return Canonical{{"year", std::to_string(y)}, {"month", std::to_string(m)},
                   {"day", std::to_string(d)}};
}

std::optional<Canonical> time_canonical(int h, int m, int s) {
  if (h < 0 || h > 23 || m < 0 || m > 59 || s < 0 || s > 59) return std::nullopt;
  Canonical c{{"hour", std::to_string(h)}, {"minute", std::to_string(m)}};
  if (s > 0) c["second"] = std::to_string(s);
  return c;
}

std::string initials_of(std::string_view middle) {
  std::string out;
  bool at_word = true;
  for (char c : middle) {
    if (std::isalpha(static_cast<unsigned char>(c))) {
      if (at_word) out.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
      at_word = false;
    } else {
      at_word = true;
    }
  }
  return out;
}

Canonical name_canonical(std::string_view family, std::string_view given,
                         std::string_view middle) {
  Canonical c{{"family", upper(collapse_spaces(family))}};
  if (!text::trim(given).empty()) c["given"] = upper(collapse_spaces(given));
  const std::string mid = initials_of(middle);
  if (!mid.empty() && c.contains("given")) c["middle"] = mid;
  return c;
}

std::optional<Canonical> parse_person_name(std::string_view value) {
  const std::string v = collapse_spaces(value);
  if (v.empty()) return std::nullopt;
  std::vector<std::string> parts;
  if (v.find('^') != std::string::npos) {
    std::stringstream ss(v);
    std::string part;
    while (std::getline(ss, part, '^')) parts.push_back(collapse_spaces(part));
    if (parts.empty() || parts[0].empty()) return std::nullopt;
    return name_canonical(parts[0], parts.size() > 1 ? parts[1] : "",
                          parts.size() > 2 ? parts[2] : "");
  }
  if (auto comma = v.find(','); comma != std::string::npos) {
    std::string family = collapse_spaces(v.substr(0, comma));
    std::string rest = collapse_spaces(v.substr(comma + 1));
    auto space = rest.find(' ');
    std::string given = space == std::string::npos ? rest : rest.substr(0, space);
    std::string middle = space == std::string::npos ? "" : rest.substr(space + 1);
    if (family.empty()) return std::nullopt;
    return name_canonical(family, given, middle);
  }
  std::stringstream ss(v);
  std::string word;
  while (ss >> word) parts.push_back(word);
  if (parts.size() == 1) return name_canonical(parts[0], "", "");
  std::string middle;
  for (std::size_t i = 1; i + 1 < parts.size(); ++i) middle += parts[i] + " ";
  return name_canonical(parts.back(), parts.front(), middle);
}

std::optional<Canonical> parse_date_value(std::string_view value, const Patterns& patterns);

std::optional<Canonical> parse_time_value(std::string_view value) {
  std::string v(text::trim(value));
  if (auto dot = v.find('.'); dot != std::string::npos) v = v.substr(0, dot);
  if (v.find(':') != std::string::npos) {
    std::stringstream ss(v);
    std::string h, m, s;
    std::getline(ss, h, ':');
    std::getline(ss, m, ':');
    std::getline(ss, s, ':');
    return time_canonical(to_int(h), to_int(m), s.empty() ? 0 : to_int(s));
  }
  if (v.size() == 4 || v.size() == 6) {
    return time_canonical(to_int(v.substr(0, 2)), to_int(v.substr(2, 2)),
                          v.size() == 6 ? to_int(v.substr(4, 2)) : 0);
  }
  return std::nullopt;
}

std::optional<Canonical> parse_age_value(std::string_view value) {
  std::string v = upper(text::trim(value));
  if (v.empty()) return std::nullopt;
  char unit = 'Y';
  if (std::isalpha(static_cast<unsigned char>(v.back()))) {
    unit = v.back();
    v.pop_back();
  }
  const int n = to_int(v);
  if (n < 0 || n > 150) return std::nullopt;
  if (unit == 'Y') return Canonical{{"years", std::to_string(n)}};
  return Canonical{{"amount", std::to_string(n)}, {"unit", std::string(1, unit)}};
}

std::optional<Canonical> parse_phone_value(std::string_view value) {
  const std::string d = digits_only(value);
  if (d.size() < 7) return std::nullopt;
  return Canonical{{"digits", d}};
}

std::optional<Canonical> parse_id_value(std::string_view value) {
  std::string v = upper(text::trim(value));
  if (v.size() < 4 || digits_only(v).empty()) return std::nullopt;
  return Canonical{{"id", v}};
}

std::optional<Canonical> parse_verbatim(std::string_view value) {
  std::string v = upper(collapse_spaces(value));
  if (v.empty()) return std::nullopt;
  return Canonical{{"name", v}};
}

// Applies a recognizer's parser to one regex match. Returns the canonical
// form and the surface string to record.
std::optional<std::pair<Canonical, std::string>> parse_match(const Patterns::Recognizer& r,
                                                             const std::smatch& m) {
  const std::string whole = m.str(0);
  auto g = [&](std::size_t i) { return m[i].matched ? m.str(i) : std::string(); };
  std::optional<Canonical> c;
  std::string surface = whole;
  const std::string& p = r.parser;
  if (p == "month_day_year") {
    c = date_canonical(to_int(g(3)), month_from_name(g(1)), to_int(g(2)));
  } else if (p == "day_month_year") {
    c = date_canonical(to_int(g(3)), month_from_name(g(2)), to_int(g(1)));
  } else if (p == "numeric_mdy") {
    const int a = to_int(g(1)), b = to_int(g(3)), y = to_int(g(4));
    c = date_canonical(y, a, b);
    if (!c) c = date_canonical(y, b, a);
  } else if (p == "numeric_ymd") {
    c = date_canonical(to_int(g(1)), to_int(g(3)), to_int(g(4)));
  } else if (p == "clock_time") {
    int h = to_int(g(1));
    const std::string ap = text::to_lower(g(4));
    if (!ap.empty()) {
      if (h < 1 || h > 12) return std::nullopt;
      if (ap == "p" && h != 12) h += 12;
      if (ap == "a" && h == 12) h = 0;
    }
    c = time_canonical(h, to_int(g(2)), g(3).empty() ? 0 : to_int(g(3)));
    surface = std::string(text::trim(whole));
  } else if (p == "phone") {
    c = parse_phone_value(g(1) + g(2) + g(3));
  } else if (p == "age") {
    c = parse_age_value(g(1));
  } else if (p == "identifier") {
    surface = g(1);
    c = parse_id_value(surface);
  } else if (p == "titled_name") {
    if (g(3).empty()) {
      c = name_canonical(g(1), "", "");
    } else {
      c = name_canonical(g(3), g(1), g(2));
    }
  } else if (p == "family_comma_given") {
    c = name_canonical(g(1), g(2), g(3));
  } else if (p == "verbatim") {
    surface = g(1);
    c = parse_verbatim(surface);
  } else {
    throw DataError("unknown recognizer parser '" + p + "'");
  }
  if (!c) return std::nullopt;
  return std::make_pair(std::move(*c), surface);
}

std::optional<Canonical> parse_date_value(std::string_view value, const Patterns& patterns) {
  const std::string v(text::trim(value));
  if (v.size() == 8 && digits_only(v) == v) {
    return date_canonical(to_int(v.substr(0, 4)), to_int(v.substr(4, 2)), to_int(v.substr(6, 2)));
  }
  for (const auto& r : patterns.recognizers) {
    if (r.category != PhiCategory::kDate) continue;
    std::smatch m;
    if (std::regex_search(v, m, *r.regex)) {
      if (auto parsed = parse_match(r, m)) return parsed->first;
    }
  }
  return std::nullopt;
}

// ----------------------------------------------------------------- layouts

std::string ordinal_suffix(int d) {
  if (d % 100 >= 11 && d % 100 <= 13) return "th";
  switch (d % 10) {
    case 1: return "st";
    case 2: return "nd";
    case 3: return "rd";
    default: return "th";
  }
}

std::string pad(int v, std::size_t width) {
  std::string s = std::to_string(v);
  while (s.size() < width) s.insert(s.begin(), '0');
  return s;
}

std::string fill_layout(std::string_view layout, const std::map<std::string, std::string>& values) {
  std::string out;
  std::size_t i = 0;
  while (i < layout.size()) {
    if (layout[i] == '{') {
      auto close = layout.find('}', i);
      if (close == std::string_view::npos) throw DataError("unterminated placeholder in layout");
      const std::string key(layout.substr(i + 1, close - i - 1));
      auto it = values.find(key);
      if (it == values.end()) throw DataError("unknown placeholder {" + key + "} in layout");
      out += it->second;
      i = close + 1;
      continue;
    }
    out.push_back(layout[i++]);
  }
  return out;
}

int field_int(const Canonical& c, const char* key) {
  auto it = c.find(key);
  return it == c.end() ? -1 : to_int(it->second);
}

void add_name_variants(const Canonical& c, const Patterns& patterns,
                       std::vector<std::string>& out) {
  const std::string family = c.at("family");
  auto git = c.find("given");
  auto mit = c.find("middle");
  std::vector<std::string> plain = {family};
  std::vector<std::string> titled_base = {family};
  if (git != c.end()) {
    const std::string& given = git->second;
    const std::string gi(1, given.front());
    plain.insert(plain.end(), {given + " " + family, gi + ". " + family, gi + " " + family,
                               gi + "." + family, family + ", " + given, family + "^" + given});
    titled_base.insert(titled_base.end(), {given + " " + family, gi + ". " + family});
    if (mit != c.end()) {
      std::string spaced, dotted, dense;
      for (char m : mit->second) {
        spaced += std::string(spaced.empty() ? "" : " ") + m;
        dotted += std::string(dotted.empty() ? "" : " ") + m + ".";
        dense += std::string(1, m) + ".";
      }
      plain.insert(plain.end(),
                   {given + " " + spaced + " " + family, given + " " + dotted + " " + family,
                    gi + ". " + dotted + " " + family, gi + "." + dense + " " + family,
                    gi + "." + dense + family, family + ", " + given + " " + spaced,
                    family + ", " + given + " " + dotted, family + "^" + given + "^" + mit->second});
      titled_base.insert(titled_base.end(), {given + " " + spaced + " " + family,
                                             given + " " + dotted + " " + family,
                                             gi + ". " + dotted + " " + family});
    }
  }
  out.insert(out.end(), plain.begin(), plain.end());
  for (const auto& title : patterns.name_titles) {
    for (const auto& b : titled_base) out.push_back(title + " " + b);
  }
}

}  // namespace

// --------------------------------------------------------------- categories

std::string_view to_string(PhiCategory c) {
  switch (c) {
    case PhiCategory::kPersonName: return "PersonName";
    case PhiCategory::kInstitution: return "Institution";
    case PhiCategory::kAddress: return "Address";
    case PhiCategory::kAge: return "Age";
    case PhiCategory::kDate: return "Date";
    case PhiCategory::kTime: return "Time";
    case PhiCategory::kPhone: return "Phone";
    case PhiCategory::kAccessionNumber: return "AccessionNumber";
    case PhiCategory::kMedicalRecordNumber: return "MedicalRecordNumber";
  }
  return "PersonName";
}

PhiCategory parse_category(std::string_view s) {
  for (PhiCategory c : kAllCategories) {
    if (to_string(c) == s) return c;
  }
  throw DataError("unknown PHI category '" + std::string(s) + "'");
}

std::string_view fiducial(PhiCategory c) {
  switch (c) {
    case PhiCategory::kPersonName: return "{{NAME}}";
    case PhiCategory::kInstitution: return "{{INSTITUTION}}";
    case PhiCategory::kAddress: return "{{ADDRESS}}";
    case PhiCategory::kAge: return "{{AGE}}";
    case PhiCategory::kDate:
    case PhiCategory::kTime: return "{{DATETIME}}";
    case PhiCategory::kPhone: return "{{PHONE}}";
    case PhiCategory::kAccessionNumber: return "{{ACCESSION}}";
    case PhiCategory::kMedicalRecordNumber: return "{{MRN}}";
  }
  return "{{NAME}}";
}

void validate_canonical(PhiCategory category, const Canonical& c) {
  auto need = [&](const char* key) {
    auto it = c.find(key);
    if (it == c.end() || it->second.empty()) {
      throw DataError(std::string(to_string(category)) + " canonical form lacks '" + key + "'");
    }
  };
  switch (category) {
    case PhiCategory::kPersonName: need("family"); break;
    case PhiCategory::kInstitution:
    case PhiCategory::kAddress: need("name"); break;
    case PhiCategory::kAge:
      if (!c.contains("years")) {
        need("amount");
        need("unit");
      }
      break;
    case PhiCategory::kDate:
      need("year");
      need("month");
      need("day");
      if (!valid_date(field_int(c, "year"), field_int(c, "month"), field_int(c, "day"))) {
        throw DataError("Date canonical form is not a calendar date");
      }
      break;
    case PhiCategory::kTime: need("hour"); need("minute"); break;
    case PhiCategory::kPhone: need("digits"); break;
    case PhiCategory::kAccessionNumber:
    case PhiCategory::kMedicalRecordNumber: need("id"); break;
  }
}

// -------------------------------------------------------------------- store

void PhiStore::add(PhiEntity entity) {
  if (entity.surfaces.empty()) throw DataError("PHI entity without surfaces");
  validate_canonical(entity.category, entity.canonical);
  auto key = std::make_pair(entity.category, entity.canonical);
  auto it = entities_.find(key);
  if (it == entities_.end()) {
    entities_.emplace(std::move(key), std::move(entity));
    return;
  }
  it->second.surfaces.insert(entity.surfaces.begin(), entity.surfaces.end());
  if (entity.source == PhiSource::kMetadataSidecar) it->second.source = entity.source;
}

void PhiStore::merge(const PhiStore& other) {
  for (const auto& [key, e] : other.entities_) add(e);
}

std::vector<PhiEntity> PhiStore::entities() const {
  std::vector<PhiEntity> out;
  out.reserve(entities_.size());
  for (const auto& [key, e] : entities_) out.push_back(e);
  return out;
}

void PhiStore::load(const std::filesystem::path& path) {
  const std::string source = path.string();
  detail::for_each_line(path, [&](std::size_t number, std::string_view line) {
    if (is_provenance_line(line)) return;
    const std::string where = source + ":" + std::to_string(number);
    json j = detail::parse_object(line, where);
    PhiEntity e;
    try {
      e.category = parse_category(detail::require_string(j, "category", where));
      e.canonical = j.at("canonical").get<Canonical>();
      e.surfaces = j.at("surfaces").get<std::set<std::string>>();
      if (auto it = j.find("source"); it != j.end()) {
        const auto s = it->get<std::string>();
        if (s == "MetadataSidecar") {
          e.source = PhiSource::kMetadataSidecar;
        } else if (s == "ReportText") {
          e.source = PhiSource::kReportText;
        } else {
          throw DataError("unknown source '" + s + "'");
        }
      }
      add(std::move(e));
    } catch (const json::exception& ex) {
      throw DataError(where + ": malformed PHI entity (" + ex.what() + ")");
    } catch (const DataError& ex) {
      throw DataError(where + ": " + ex.what());
    }
  });
}

void PhiStore::save(const std::filesystem::path& path) const {
  auto out = detail::open_for_write(path);
  for (const auto& [key, e] : entities_) {
    json j = {{"category", to_string(e.category)},
              {"canonical", e.canonical},
              {"surfaces", e.surfaces},
              {"source", e.source == PhiSource::kMetadataSidecar ? "MetadataSidecar" : "ReportText"}};
    out << detail::dump_compact(j) << '\n';
  }
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

// ----------------------------------------------------------------- patterns

Patterns Patterns::parse(std::string_view json_text, const std::string& source) {
  json j = json::parse(json_text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw DataError(source + ": not a JSON object");
  Patterns p;
  try {
    for (const auto& [field, cat] : j.at("sidecar_fields").items()) {
      p.sidecar_fields[field] = parse_category(cat.get<std::string>());
    }
    for (const auto& r : j.at("recognizers")) {
      Recognizer rec{parse_category(r.at("category").get<std::string>()),
                     r.at("parser").get<std::string>(), r.at("pattern").get<std::string>(),
                     nullptr};
      auto flags = std::regex::ECMAScript | std::regex::optimize;
      if (r.value("icase", false)) flags |= std::regex::icase;
      try {
        rec.regex = std::make_shared<const std::regex>(rec.pattern, flags);
      } catch (const std::regex_error& e) {
        throw DataError(source + ": bad pattern '" + rec.pattern + "': " + e.what());
      }
      p.recognizers.push_back(std::move(rec));
    }
    p.date_layouts = j.at("date_layouts").get<std::vector<std::string>>();
    p.time_layouts = j.at("time_layouts").get<std::vector<std::string>>();
    p.age_layouts = j.at("age_layouts").get<std::vector<std::string>>();
    p.phone_layouts = j.at("phone_layouts").get<std::vector<std::string>>();
    p.name_titles = j.value("name_titles", std::vector<std::string>{});
  } catch (const json::exception& e) {
    throw DataError(source + ": " + e.what());
  }
  return p;
}

Patterns Patterns::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path.string());
}

const Patterns& Patterns::defaults() {
  static const Patterns p = parse(default_deid_patterns_text(), "deid_patterns.json");
  return p;
}

// --------------------------------------------------------------- first pass

std::optional<PhiEntity> parse_sidecar_value(PhiCategory category, std::string_view value) {
  std::optional<Canonical> c;
  switch (category) {
    case PhiCategory::kPersonName: c = parse_person_name(value); break;
    case PhiCategory::kInstitution:
    case PhiCategory::kAddress: c = parse_verbatim(value); break;
    case PhiCategory::kAge: c = parse_age_value(value); break;
    case PhiCategory::kDate: c = parse_date_value(value, Patterns::defaults()); break;
    case PhiCategory::kTime: c = parse_time_value(value); break;
    case PhiCategory::kPhone: c = parse_phone_value(value); break;
    case PhiCategory::kAccessionNumber:
    case PhiCategory::kMedicalRecordNumber: c = parse_id_value(value); break;
  }
  if (!c) return std::nullopt;
  PhiEntity e{category, std::move(*c), {std::string(text::trim(value))}, PhiSource::kMetadataSidecar};
  return e;
}

std::vector<PhiEntity> recognize_text(std::string_view text, const Patterns& patterns) {
  std::vector<PhiEntity> out;
  const std::string s(text);
  for (const auto& r : patterns.recognizers) {
    for (auto it = std::sregex_iterator(s.begin(), s.end(), *r.regex); it != std::sregex_iterator();
         ++it) {
      if (auto parsed = parse_match(r, *it)) {
        out.push_back({r.category, std::move(parsed->first), {parsed->second},
                       PhiSource::kReportText});
      }
    }
  }
  return out;
}

PhiStore first_pass(const Corpus& corpus, PhiStore store, const FirstPassOptions& options,
                    const Patterns& patterns) {
  for (const Report& report : corpus.reports) {
    if (options.use_sidecar) {
      for (const auto& [key, value] : report.metadata) {
        auto field = patterns.sidecar_fields.find(key);
        if (field == patterns.sidecar_fields.end()) continue;
        if (auto e = parse_sidecar_value(field->second, value)) store.add(std::move(*e));
      }
    }
    if (options.use_text) {
      for (auto& e : recognize_text(report.text, patterns)) store.add(std::move(e));
    }
  }
  return store;
}

// --------------------------------------------------------------- variants

std::vector<std::string> variants(const PhiEntity& entity, const Patterns& patterns) {
  std::vector<std::string> out(entity.surfaces.begin(), entity.surfaces.end());
  const Canonical& c = entity.canonical;
  switch (entity.category) {
    case PhiCategory::kPersonName:
      add_name_variants(c, patterns, out);
      break;
    case PhiCategory::kDate: {
      const int y = field_int(c, "year"), m = field_int(c, "month"), d = field_int(c, "day");
      const std::string month(kMonthNames[static_cast<std::size_t>(m - 1)]);
      const std::map<std::string, std::string> values = {
          {"Month", month}, {"Mon", month.substr(0, 3)}, {"d", std::to_string(d)},
          {"dd", pad(d, 2)}, {"ord", ordinal_suffix(d)},  {"m", std::to_string(m)},
          {"mm", pad(m, 2)}, {"yyyy", pad(y, 4)}};
      for (const auto& layout : patterns.date_layouts) out.push_back(fill_layout(layout, values));
      break;
    }
    case PhiCategory::kTime: {
      const int h = field_int(c, "hour"), m = field_int(c, "minute");
      const int s = c.contains("second") ? field_int(c, "second") : 0;
      const int h12 = h % 12 == 0 ? 12 : h % 12;
      const std::map<std::string, std::string> values = {
          {"H", std::to_string(h)}, {"HH", pad(h, 2)}, {"h", std::to_string(h12)},
          {"MM", pad(m, 2)},        {"SS", pad(s, 2)}, {"ap", h < 12 ? "a" : "p"}};
      for (const auto& layout : patterns.time_layouts) out.push_back(fill_layout(layout, values));
      break;
    }
    case PhiCategory::kAge: {
      if (!c.contains("years")) break;
      const int n = field_int(c, "years");
      const std::map<std::string, std::string> values = {{"n", std::to_string(n)},
                                                         {"nnn", pad(n, 3)}};
      for (const auto& layout : patterns.age_layouts) out.push_back(fill_layout(layout, values));
      break;
    }
    case PhiCategory::kPhone: {
      const std::string& d = c.at("digits");
      if (d.size() != 10) break;
      const std::map<std::string, std::string> values = {
          {"a", d.substr(0, 3)}, {"b", d.substr(3, 3)}, {"c", d.substr(6, 4)}};
      for (const auto& layout : patterns.phone_layouts) out.push_back(fill_layout(layout, values));
      break;
    }
    case PhiCategory::kAccessionNumber:
    case PhiCategory::kMedicalRecordNumber:
      out.push_back(c.at("id"));
      break;
    case PhiCategory::kInstitution:
    case PhiCategory::kAddress:
      out.push_back(c.at("name"));
      break;
  }
  for (auto& v : out) v = collapse_spaces(v);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  out.erase(std::remove(out.begin(), out.end(), std::string()), out.end());
  return out;
}

// ----------------------------------------------------------------- replacer

namespace {

char fold(char c) {
  if (text::is_space(c)) return ' ';
  if (c >= 'A' && c <= 'Z') return static_cast<char>(c - 'A' + 'a');
  return c;
}

bool word_at(std::string_view s, std::size_t i) {
  return text::is_word_byte(static_cast<unsigned char>(s[i]));
}

// Length of a fiducial such as "{{NAME}}" starting at i, or 0.
std::size_t fiducial_length(std::string_view s, std::size_t i) {
  if (s.compare(i, 2, "{{") != 0) return 0;
  std::size_t j = i + 2;
  while (j < s.size() && s[j] >= 'A' && s[j] <= 'Z') ++j;
  if (j == i + 2 || s.compare(j, 2, "}}") != 0) return 0;
  return j + 2 - i;
}

}  // namespace

Replacer::Replacer(const PhiStore& store, const Patterns& patterns) {
  nodes_.emplace_back();
  for (const PhiEntity& e : store.entities()) {
    const int category = static_cast<int>(
        std::find(kAllCategories.begin(), kAllCategories.end(), e.category) -
        kAllCategories.begin());
    for (const std::string& v : variants(e, patterns)) {
      std::size_t node = 0;
      for (char ch : v) {
        const char c = fold(ch);
        auto it = nodes_[node].next.find(c);
        if (it == nodes_[node].next.end()) {
          nodes_.emplace_back();
          it = nodes_[node].next.emplace(c, nodes_.size() - 1).first;
        }
        node = it->second;
      }
      if (nodes_[node].category < 0) {
        nodes_[node].category = category;
        ++variant_count_;
      }
    }
  }
}

std::string Replacer::apply(std::string_view s) const {
  std::string out;
  out.reserve(s.size());
  const std::size_t n = s.size();
  std::size_t i = 0;
  while (i < n) {
    if (std::size_t f = fiducial_length(s, i)) {
      out.append(s.substr(i, f));
      i += f;
      continue;
    }
    const bool left_ok = i == 0 || !(word_at(s, i - 1) && word_at(s, i));
    std::size_t best_end = 0;
    int best_category = -1;
    if (left_ok && !text::is_space(s[i])) {
      std::size_t node = 0;
      std::size_t j = i;
      while (j < n) {
        const char c = fold(s[j]);
        auto it = nodes_[node].next.find(c);
        if (it == nodes_[node].next.end()) break;
        node = it->second;
        if (c == ' ') {
          while (j < n && text::is_space(s[j])) ++j;
        } else {
          ++j;
        }
        if (nodes_[node].category >= 0 && (j == n || !(word_at(s, j - 1) && word_at(s, j)))) {
          best_end = j;
          best_category = nodes_[node].category;
        }
      }
    }
    if (best_category >= 0) {
      out.append(fiducial(kAllCategories[static_cast<std::size_t>(best_category)]));
      i = best_end;
      continue;
    }
    out.push_back(s[i]);
    ++i;
  }
  return out;
}

Report second_pass(const Report& report, const Replacer& replacer, const Patterns& patterns) {
  Report out;
  out.report_id = report.report_id;
  out.site = report.site;
  out.text = replacer.apply(report.text);
  for (const auto& [key, value] : report.metadata) {
    if (patterns.sidecar_fields.contains(key)) continue;
    out.metadata[key] = key == kDeidentifiedKey ? value : replacer.apply(value);
  }
  out.metadata[kDeidentifiedKey] = "true";
  return out;
}

Report second_pass(const Report& report, const PhiStore& store) {
  return second_pass(report, Replacer(store));
}

bool is_deidentified(const Report& report) {
  auto it = report.metadata.find(kDeidentifiedKey);
  return it != report.metadata.end() && it->second == "true";
}

}  // namespace radlabel::deid
