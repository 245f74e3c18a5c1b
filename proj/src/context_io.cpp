#include <charconv>
#include <sstream>

#include "json_util.hpp"
#include "noesis/context.hpp"

namespace noesis {

using detail::json;

std::size_t line_of_offset(std::string_view text, std::size_t offset) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

ContextFormat format_for_path(std::string_view path) {
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".cxt") return ContextFormat::Cxt;
  return ContextFormat::Json;
}

namespace {

FormalContext parse_json_context(std::string_view bytes) {
  json doc = detail::parse_json(bytes);
  if (!doc.is_object()) detail::schema_error("context document must be an object");

  std::vector<QualityDimension> dims;
  const json& jd = detail::member(doc, "dimensions");
  if (!jd.is_array()) detail::schema_error("'dimensions' must be an array");
  for (const auto& d : jd)
    dims.push_back({detail::as_string(detail::member(d, "name"), "dimension name"),
                    detail::as_string_list(detail::member(d, "attributes"), "dimension attributes")});

  auto objects = detail::as_string_list(detail::member(doc, "objects"), "'objects'");

  const json& ji = detail::member(doc, "incidence");
  if (!ji.is_array()) detail::schema_error("'incidence' must be an array of rows");
  Incidence inc;
  for (const auto& row : ji) {
    if (!row.is_array()) detail::schema_error("incidence rows must be arrays");
    std::vector<bool> r;
    for (const auto& cell : row) {
      if (!cell.is_number_integer() || (cell.get<int>() != 0 && cell.get<int>() != 1))
        detail::schema_error("incidence cells must be 0 or 1");
      r.push_back(cell.get<int>() == 1);
    }
    inc.push_back(std::move(r));
  }

  std::optional<GranuleMap> granules;
  if (auto it = doc.find("granules"); it != doc.end()) {
    if (!it->is_object()) detail::schema_error("'granules' must be an object");
    GranuleMap gm;
    for (const auto& [name, g] : it->items()) gm.emplace(name, Granule{detail::as_count(g, "granule")});
    granules = std::move(gm);
  }

  try {
    return FormalContext::create(std::move(objects), std::move(dims), inc, granules);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ParseError) throw;
    throw Error(ErrorKind::ValidationError, e.what());
  }
}

std::string json_context(const FormalContext& ctx) {
  json doc = json::object();
  json dims = json::array();
  for (const auto& d : ctx.dimensions())
    dims.push_back(json{{"name", d.name}, {"attributes", detail::names_json(d.attributes)}});
  doc["dimensions"] = std::move(dims);
  doc["objects"] = detail::names_json(ctx.objects());
  json inc = json::array();
  for (std::size_t i = 0; i < ctx.object_count(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < ctx.attribute_count(); ++j) row.push_back(ctx.incident(i, j) ? 1 : 0);
    inc.push_back(std::move(row));
  }
  doc["incidence"] = std::move(inc);
  json gr = json::object();
  for (std::size_t i = 0; i < ctx.object_count(); ++i) gr[ctx.object_name(i)] = ctx.granule(i).index;
  doc["granules"] = std::move(gr);
  return doc.dump() + "\n";
}

class LineReader {
 public:
  explicit LineReader(std::string_view text) : text_(text) {}

  bool done() const { return pos_ >= text_.size(); }
  std::size_t line() const { return line_; }

  std::string_view next(const char* expecting) {
    if (done()) throw ParseError(std::string("unexpected end of input, expected ") + expecting, line_ + 1);
    std::size_t end = text_.find('\n', pos_);
    if (end == std::string_view::npos) end = text_.size();
    std::string_view l = text_.substr(pos_, end - pos_);
    if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
    pos_ = end + 1;
    ++line_;
    return l;
  }

  std::string_view peek() const {
    std::size_t end = text_.find('\n', pos_);
    if (end == std::string_view::npos) end = text_.size();
    std::string_view l = text_.substr(pos_, end - pos_);
    if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
    return l;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 0;
};

std::size_t parse_count(LineReader& in, const char* what) {
  auto l = in.next(what);
  std::size_t v = 0;
  auto [p, ec] = std::from_chars(l.data(), l.data() + l.size(), v);
  if (ec != std::errc{} || p != l.data() + l.size() || l.empty())
    throw ParseError(std::string("expected ") + what + ", got '" + std::string(l) + "'", in.line());
  return v;
}

FormalContext parse_cxt_context(std::string_view bytes, std::string_view dimension) {
  LineReader in(bytes);
  if (in.next("header 'B'") != "B") throw ParseError("header must be 'B'", in.line());
  in.next("context name line");
  const std::size_t n = parse_count(in, "object count");
  const std::size_t m = parse_count(in, "attribute count");
  if (!in.done() && in.peek().empty()) in.next("blank line");

  std::vector<std::string> objects, attributes;
  for (std::size_t i = 0; i < n; ++i) objects.emplace_back(in.next("object name"));
  for (std::size_t j = 0; j < m; ++j) attributes.emplace_back(in.next("attribute name"));

  Incidence inc(n, std::vector<bool>(m));
  for (std::size_t i = 0; i < n; ++i) {
    auto row = in.next("incidence row");
    if (row.size() != m)
      throw ParseError("row has " + std::to_string(row.size()) + " cells, expected " + std::to_string(m), in.line());
    for (std::size_t j = 0; j < m; ++j) {
      char c = row[j];
      if (c == 'X' || c == 'x')
        inc[i][j] = true;
      else if (c != '.')
        throw ParseError(std::string("unexpected cell '") + c + "'", in.line(), j + 1);
    }
  }
  while (!in.done())
    if (!in.next("end of input").empty()) throw ParseError("trailing content after incidence rows", in.line());

  std::vector<QualityDimension> dims;
  if (m > 0) dims.push_back({std::string(dimension), std::move(attributes)});
  try {
    return FormalContext::create(std::move(objects), std::move(dims), inc);
  } catch (const Error& e) {
    throw Error(ErrorKind::ValidationError, e.what());
  }
}

std::string cxt_body(const FormalContext& ctx) {
  std::ostringstream out;
  out << "B\n\n" << ctx.object_count() << "\n" << ctx.attribute_count() << "\n\n";
  for (const auto& o : ctx.objects()) out << o << "\n";
  for (const auto& a : ctx.attributes()) out << a << "\n";
  for (std::size_t i = 0; i < ctx.object_count(); ++i) {
    for (std::size_t j = 0; j < ctx.attribute_count(); ++j) out << (ctx.incident(i, j) ? 'X' : '.');
    out << "\n";
  }
  return out.str();
}

void check_cxt_names(const FormalContext& ctx) {
  auto bad = [](const std::string& s) { return s.empty() || s.find_first_of("\r\n") != std::string::npos; };
  for (const auto& o : ctx.objects())
    if (bad(o)) throw Error(ErrorKind::ValidationError, "object name not representable in CXT: '" + o + "'");
  for (const auto& a : ctx.attributes())
    if (bad(a)) throw Error(ErrorKind::ValidationError, "attribute name not representable in CXT: '" + a + "'");
}

}  // namespace

FormalContext parse_context(std::string_view bytes, ContextFormat format, std::string_view cxt_dimension) {
  return format == ContextFormat::Json ? parse_json_context(bytes) : parse_cxt_context(bytes, cxt_dimension);
}

std::string serialize_context(const FormalContext& ctx, ContextFormat format) {
  if (format == ContextFormat::Json) return json_context(ctx);
  if (ctx.dimensions().size() > 1)
    throw Error(ErrorKind::CxtLossy, std::to_string(ctx.dimensions().size()) +
                                         " quality dimensions cannot be represented in CXT");
  if (!ctx.all_granules_zero()) throw Error(ErrorKind::CxtLossy, "time granules cannot be represented in CXT");
  check_cxt_names(ctx);
  return cxt_body(ctx);
}

std::string serialize_cxt_flattened(const FormalContext& ctx, std::vector<std::string>& warnings) {
  if (ctx.dimensions().size() > 1)
    warnings.push_back("flattened " + std::to_string(ctx.dimensions().size()) + " quality dimensions into one");
  if (!ctx.all_granules_zero()) warnings.push_back("dropped object time granules");
  check_cxt_names(ctx);
  return cxt_body(ctx);
}

}  // namespace noesis
