#include "reviewaudit/pdf/writer.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "reviewaudit/pdf/lexer.hpp"

namespace reviewaudit::pdf {

namespace {

std::string format_number(double v) {
  const auto ll = static_cast<long long>(std::llround(v));
  if (v == static_cast<double>(ll) && std::abs(v) < 1e15) return std::to_string(ll);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  std::string s(buf);
  while (!s.empty() && s.back() == '0') s.pop_back();
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

std::string format_name(const std::string& n) {
  std::string out = "/";
  for (const char c : n) {
    const auto u = static_cast<unsigned char>(c);
    if (c == '#' || u < 0x21 || u > 0x7E || is_pdf_delimiter(c)) {
      char buf[4];
      std::snprintf(buf, sizeof buf, "#%02X", u);
      out += buf;
    } else {
      out.push_back(c);
    }
  }
  return out;
}

std::string format_string(const std::string& s) {
  std::string out = "(";
  for (const char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '(': out += "\\("; break;
      case ')': out += "\\)"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out.push_back(c);
    }
  }
  out.push_back(')');
  return out;
}

void serialize_into(const Object& obj, std::string& out);

void serialize_dict(const Dict& d, std::string& out) {
  out += "<<";
  bool first = true;
  for (const auto& [key, value] : d.items) {
    if (!first) out.push_back(' ');
    first = false;
    out += format_name(key);
    out.push_back(' ');
    serialize_into(value, out);
  }
  out += ">>";
}

void serialize_into(const Object& obj, std::string& out) {
  if (obj.is_null()) {
    out += "null";
  } else if (obj.is_bool()) {
    out += obj.boolean() ? "true" : "false";
  } else if (obj.is_number()) {
    out += format_number(obj.number());
  } else if (obj.is_string()) {
    out += format_string(obj.string());
  } else if (obj.is_name()) {
    out += format_name(obj.name());
  } else if (obj.is_ref()) {
    out += std::to_string(obj.ref().num) + " " + std::to_string(obj.ref().gen) + " R";
  } else if (obj.is_array()) {
    out.push_back('[');
    bool first = true;
    for (const Object& e : obj.array()) {
      if (!first) out.push_back(' ');
      first = false;
      serialize_into(e, out);
    }
    out.push_back(']');
  } else if (obj.is_dict()) {
    serialize_dict(obj.dict(), out);
  } else if (obj.is_stream()) {
    Dict d = obj.stream().dict;
    d.set("Length", Object{static_cast<double>(obj.stream().raw.size())});
    serialize_dict(d, out);
    out += "\nstream\n";
    out += obj.stream().raw;
    out += "\nendstream";
  }
}

}  // namespace

std::string serialize_object(const Object& obj) {
  std::string out;
  serialize_into(obj, out);
  return out;
}

namespace {

// Cross-reference stream flavor: row format W [1 4 2], uncompressed data.
std::string write_with_xref_stream(const Document& doc, bool pack_objects) {
  std::string out = "%PDF-1.7\n%\xE2\xE3\xCF\xD3\n";

  // Objects that hold stream data stay in the body; everything else may be
  // packed into a single object stream.
  std::vector<int> packed;
  if (pack_objects)
    for (const auto& [num, obj] : doc.objects)
      if (!obj.is_stream()) packed.push_back(num);

  struct Row {
    int type = 0;
    long long a = 0;
    long long b = 0;
  };
  std::map<int, Row> rows;

  for (const auto& [num, obj] : doc.objects) {
    if (pack_objects && !obj.is_stream()) continue;
    rows[num] = Row{1, static_cast<long long>(out.size()), 0};
    out += std::to_string(num) + " 0 obj\n";
    out += serialize_object(obj);
    out += "\nendobj\n";
  }

  int next = doc.objects.empty() ? 1 : doc.objects.rbegin()->first + 1;
  if (!packed.empty()) {
    const int container = next++;
    std::string header;
    std::string body;
    for (std::size_t i = 0; i < packed.size(); ++i) {
      const int num = packed[i];
      rows[num] = Row{2, container, static_cast<long long>(i)};
      header += std::to_string(num) + " " + std::to_string(body.size()) + " ";
      body += serialize_object(*doc.get(num));
      body.push_back('\n');
    }
    Stream s;
    s.dict.set("Type", Object{Name{"ObjStm"}});
    s.dict.set("N", Object{static_cast<double>(packed.size())});
    s.dict.set("First", Object{static_cast<double>(header.size())});
    s.raw = header + body;
    rows[container] = Row{1, static_cast<long long>(out.size()), 0};
    out += std::to_string(container) + " 0 obj\n";
    out += serialize_object(Object{std::move(s)});
    out += "\nendobj\n";
  }

  const int xref_num = next++;
  const std::size_t xref_at = out.size();
  std::string data;
  auto put = [&data](long long v, int width) {
    for (int i = width - 1; i >= 0; --i)
      data.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  };
  put(0, 1);
  put(0, 4);
  put(65535, 2);  // object 0: free
  for (int num = 1; num <= xref_num; ++num) {
    const auto it = rows.find(num);
    Row r = it != rows.end() ? it->second : Row{0, 0, 0};
    if (num == xref_num) r = Row{1, static_cast<long long>(xref_at), 0};
    put(r.type, 1);
    put(r.a, 4);
    put(r.b, 2);
  }

  Stream xs;
  xs.dict.set("Type", Object{Name{"XRef"}});
  xs.dict.set("Size", Object{static_cast<double>(xref_num + 1)});
  {
    Array w;
    w.emplace_back(1);
    w.emplace_back(4);
    w.emplace_back(2);
    xs.dict.set("W", Object{std::move(w)});
  }
  for (const auto& [key, value] : doc.trailer.items)
    if (key == "Root" || key == "Info" || key == "ID") xs.dict.set(key, value);
  xs.raw = std::move(data);
  out += std::to_string(xref_num) + " 0 obj\n";
  out += serialize_object(Object{std::move(xs)});
  out += "\nendobj\n";

  out += "startxref\n" + std::to_string(xref_at) + "\n%%EOF\n";
  return out;
}

}  // namespace

std::string write_document(const Document& doc, const WriteOptions& opts) {
  if (opts.xref_stream) return write_with_xref_stream(doc, opts.pack_objects);
  return write_document(doc);
}

std::string write_document(const Document& doc) {
  std::string out = "%PDF-1.7\n%\xE2\xE3\xCF\xD3\n";
  std::map<int, std::size_t> offsets;
  for (const auto& [num, obj] : doc.objects) {
    offsets[num] = out.size();
    out += std::to_string(num) + " 0 obj\n";
    serialize_into(obj, out);
    out += "\nendobj\n";
  }

  const std::size_t xref_at = out.size();
  const int size = doc.objects.empty() ? 1 : doc.objects.rbegin()->first + 1;
  out += "xref\n";
  // Emit one subsection per contiguous run of object numbers.
  auto it = offsets.begin();
  {
    char buf[32];
    out += "0 1\n";
    out += "0000000000 65535 f \n";
    while (it != offsets.end()) {
      auto run_end = it;
      int count = 0;
      while (run_end != offsets.end() && run_end->first == it->first + count) {
        ++run_end;
        ++count;
      }
      out += std::to_string(it->first) + " " + std::to_string(count) + "\n";
      for (; it != run_end; ++it) {
        std::snprintf(buf, sizeof buf, "%010zu 00000 n \n", it->second);
        out += buf;
      }
    }
  }

  Dict trailer = doc.trailer;
  trailer.erase("Prev");
  trailer.erase("XRefStm");
  trailer.erase("Type");
  trailer.erase("Filter");
  trailer.erase("DecodeParms");
  trailer.erase("Length");
  trailer.erase("W");
  trailer.erase("Index");
  trailer.set("Size", Object{static_cast<double>(size)});
  out += "trailer\n";
  {
    std::string t;
    serialize_dict(trailer, t);
    out += t;
  }
  out += "\nstartxref\n" + std::to_string(xref_at) + "\n%%EOF\n";
  return out;
}

}  // namespace reviewaudit::pdf
