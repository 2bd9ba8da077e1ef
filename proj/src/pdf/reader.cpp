#include "reviewaudit/pdf/reader.hpp"

#include <cctype>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "reviewaudit/core/error.hpp"
#include "reviewaudit/core/log.hpp"
#include "reviewaudit/pdf/lexer.hpp"

namespace reviewaudit::pdf {

namespace {

constexpr std::size_t npos = std::string_view::npos;

struct XrefEntry {
  enum class Kind { Direct, InStream };
  Kind kind = Kind::Direct;
  std::size_t offset = 0;  // Direct: byte offset of "N G obj"
  int container = 0;       // InStream: object number of the /ObjStm
  int index = 0;           // InStream: position within the container
};

class FileParser {
public:
  explicit FileParser(std::string_view buf) : buf_(buf) {}

  Document parse() {
    if (buf_.find("%PDF-") == npos) throw MalformedPdf("missing %PDF header");
    bool ok = false;
    try {
      ok = parse_via_xref();
    } catch (const EncryptedPdf&) {
      throw;
    } catch (const Error&) {
      ok = false;
    }
    if (!ok) {
      doc_ = Document{};
      parse_via_scan();
    }
    if (doc_.trailer.has("Encrypt")) throw EncryptedPdf("document has an /Encrypt dictionary");
    const Object* root = doc_.resolve_key(doc_.trailer, "Root");
    if (!root || !root->is_dict()) throw MalformedPdf("no document catalog");
    return std::move(doc_);
  }

private:
  // ---- xref-driven path -------------------------------------------------

  bool parse_via_xref() {
    const auto start = find_startxref();
    if (!start) return false;

    // Walk the chain newest-to-oldest; first writer of an object number or
    // trailer key wins, so updates shadow originals.
    std::set<std::size_t> visited;
    std::vector<std::size_t> queue{*start};
    while (!queue.empty()) {
      const std::size_t off = queue.back();
      queue.pop_back();
      if (off >= buf_.size() || !visited.insert(off).second) continue;
      Lexer lex(buf_, off);
      if (lex.try_keyword("xref")) {
        parse_classic_table(lex, queue);
      } else {
        parse_xref_stream(off, queue);
      }
    }
    if (doc_.trailer.has("Encrypt")) throw EncryptedPdf("document has an /Encrypt dictionary");

    // First pass: objects stored directly in the file body.
    for (const auto& [num, entry] : entries_) {
      if (!entry || entry->kind != XrefEntry::Kind::Direct) continue;
      load_direct(num, entry->offset);
    }
    // Second pass: objects packed into compressed object streams.
    for (const auto& [num, entry] : entries_) {
      if (!entry || entry->kind != XrefEntry::Kind::InStream) continue;
      load_packed(entry->container);
    }
    const Object* root = doc_.resolve_key(doc_.trailer, "Root");
    return root && root->is_dict();
  }

  std::optional<std::size_t> find_startxref() const {
    const std::size_t tail_begin = buf_.size() > 2048 ? buf_.size() - 2048 : 0;
    const std::size_t at = buf_.rfind("startxref");
    if (at == npos || at < tail_begin) return std::nullopt;
    Lexer lex(buf_, at + 9);
    const auto off = lex.try_number();
    if (!off || *off < 0 || *off >= static_cast<double>(buf_.size())) return std::nullopt;
    return static_cast<std::size_t>(*off);
  }

  void parse_classic_table(Lexer& lex, std::vector<std::size_t>& queue) {
    while (true) {
      if (lex.try_keyword("trailer")) {
        Object t = lex.parse_object();
        if (!t.is_dict()) throw MalformedPdf("trailer is not a dictionary");
        merge_trailer(t.dict(), queue);
        return;
      }
      const auto first = lex.try_number();
      const auto count = lex.try_number();
      if (!first || !count) throw MalformedPdf("malformed xref subsection header");
      for (long long k = 0; k < static_cast<long long>(*count); ++k) {
        const auto f1 = lex.try_number();
        const auto f2 = lex.try_number();
        const std::string kw = lex.read_keyword();
        if (!f1 || !f2 || (kw != "n" && kw != "f"))
          throw MalformedPdf("malformed xref table entry");
        const int num = static_cast<int>(*first) + static_cast<int>(k);
        if (entries_.count(num)) continue;
        if (kw == "n") {
          entries_[num] = XrefEntry{XrefEntry::Kind::Direct, static_cast<std::size_t>(*f1), 0, 0};
        } else {
          entries_[num] = std::nullopt;  // freed: block older revisions
        }
      }
    }
  }

  void parse_xref_stream(std::size_t off, std::vector<std::size_t>& queue) {
    auto [num, obj, end] = parse_indirect_at(off);
    (void)num;
    (void)end;
    if (!obj.is_stream()) throw MalformedPdf("xref offset does not point at a table or stream");
    const Stream& s = obj.stream();
    const auto data = decode_stream(s);
    if (!data) throw MalformedPdf("xref stream uses an unsupported filter");

    const Object* w = s.dict.find("W");
    if (!w || !w->is_array() || w->array().size() < 3)
      throw MalformedPdf("xref stream missing /W");
    int widths[3];
    for (int i = 0; i < 3; ++i) widths[i] = static_cast<int>(w->array()[i].integer());
    const int row_len = widths[0] + widths[1] + widths[2];
    if (row_len <= 0) throw MalformedPdf("degenerate /W in xref stream");

    std::vector<std::pair<long long, long long>> index;  // (first, count)
    if (const Object* idx = s.dict.find("Index"); idx && idx->is_array()) {
      const Array& a = idx->array();
      for (std::size_t i = 0; i + 1 < a.size(); i += 2)
        index.emplace_back(a[i].integer(), a[i + 1].integer());
    } else {
      const Object* size = s.dict.find("Size");
      index.emplace_back(0, size ? size->integer() : 0);
    }

    std::size_t p = 0;
    auto read_field = [&](int width, long long fallback) -> long long {
      if (width == 0) return fallback;
      long long v = 0;
      for (int i = 0; i < width; ++i)
        v = (v << 8) | static_cast<unsigned char>((*data)[p++]);
      return v;
    };
    for (const auto& [first, count] : index) {
      for (long long k = 0; k < count; ++k) {
        if (p + static_cast<std::size_t>(row_len) > data->size()) break;
        const long long type = read_field(widths[0], 1);
        const long long a = read_field(widths[1], 0);
        const long long b = read_field(widths[2], 0);
        const int onum = static_cast<int>(first + k);
        if (entries_.count(onum)) continue;
        if (type == 1) {
          entries_[onum] =
              XrefEntry{XrefEntry::Kind::Direct, static_cast<std::size_t>(a), 0, 0};
        } else if (type == 2) {
          entries_[onum] = XrefEntry{XrefEntry::Kind::InStream, 0, static_cast<int>(a),
                                     static_cast<int>(b)};
        } else {
          entries_[onum] = std::nullopt;
        }
      }
    }
    merge_trailer(s.dict, queue);
  }

  void merge_trailer(const Dict& t, std::vector<std::size_t>& queue) {
    for (const auto& [key, value] : t.items) {
      if (key == "Prev" || key == "XRefStm") continue;
      if (!doc_.trailer.has(key)) doc_.trailer.set(key, value);
    }
    // Hybrid files carry a cross-reference stream alongside the classic
    // table; it must be consulted before any older revision.
    if (const Object* h = t.find("XRefStm"); h && h->is_number())
      queue.push_back(static_cast<std::size_t>(h->integer()));
    if (const Object* prev = t.find("Prev"); prev && prev->is_number())
      queue.push_back(static_cast<std::size_t>(prev->integer()));
  }

  void load_direct(int expected_num, std::size_t off) {
    if (off >= buf_.size()) throw MalformedPdf("xref offset beyond end of file");
    auto [num, obj, end] = parse_indirect_at(off);
    (void)end;
    if (num != expected_num)
      log::warn("object number mismatch at offset " + std::to_string(off));
    doc_.objects[num] = std::move(obj);
  }

  void load_packed(int container) {
    if (expanded_containers_.count(container)) return;
    expanded_containers_.insert(container);
    const Object* c = doc_.get(container);
    if (!c || !c->is_stream()) throw MalformedPdf("object stream container missing");
    expand_objstm(c->stream(), /*overwrite=*/false);
  }

  // ---- shared helpers ---------------------------------------------------

  std::tuple<int, Object, std::size_t> parse_indirect_at(std::size_t off) {
    Lexer lex(buf_, off);
    const auto num = lex.try_number();
    const auto gen = lex.try_number();
    if (!num || !gen || !lex.try_keyword("obj"))
      throw MalformedPdf("expected indirect object at offset " + std::to_string(off));
    Object obj = lex.parse_object();
    if (obj.is_dict() && lex.try_keyword("stream")) {
      std::size_t p = lex.pos();
      if (p < buf_.size() && buf_[p] == '\r') ++p;
      if (p < buf_.size() && buf_[p] == '\n') ++p;
      const std::size_t data_start = p;
      std::size_t data_len = npos;
      if (const Object* len = obj.dict().find("Length"); len && len->is_number()) {
        const auto L = static_cast<std::size_t>(len->integer());
        if (data_start + L <= buf_.size()) {
          Lexer v(buf_, data_start + L);
          const std::size_t before = v.pos();
          if (v.try_keyword("endstream") && v.pos() - before < 32) {
            data_len = L;
            lex.seek(v.pos());
          }
        }
      }
      if (data_len == npos) {
        // /Length absent, indirect, or wrong: recover by scanning.
        const std::size_t e = buf_.find("endstream", data_start);
        if (e == npos) throw MalformedPdf("unterminated stream");
        std::size_t end = e;
        if (end > data_start && buf_[end - 1] == '\n') --end;
        if (end > data_start && buf_[end - 1] == '\r') --end;
        data_len = end - data_start;
        lex.seek(e + 9);
      }
      Stream s{std::move(obj.dict()), std::string(buf_.substr(data_start, data_len))};
      obj = Object{std::move(s)};
    }
    lex.try_keyword("endobj");  // tolerate files that omit it
    return {static_cast<int>(*num), std::move(obj), lex.pos()};
  }

  void expand_objstm(const Stream& s, bool overwrite) {
    const auto data = decode_stream(doc_, s);
    if (!data) throw MalformedPdf("object stream uses an unsupported filter");
    const Object* n = doc_.resolve(s.dict.find("N"));
    const Object* first = doc_.resolve(s.dict.find("First"));
    if (!n || !n->is_number() || !first || !first->is_number())
      throw MalformedPdf("object stream missing /N or /First");
    Lexer header(*data, 0);
    std::vector<std::pair<int, std::size_t>> slots;
    for (long long i = 0; i < n->integer(); ++i) {
      const auto onum = header.try_number();
      const auto ooff = header.try_number();
      if (!onum || !ooff) throw MalformedPdf("truncated object stream header");
      slots.emplace_back(static_cast<int>(*onum),
                         static_cast<std::size_t>(first->integer() + *ooff));
    }
    for (const auto& [onum, ooff] : slots) {
      if (!overwrite && doc_.objects.count(onum)) continue;
      if (ooff >= data->size()) throw MalformedPdf("object stream offset out of range");
      Lexer lex(*data, ooff);
      doc_.objects[onum] = lex.parse_object();
    }
  }

  // ---- scan fallback ----------------------------------------------------

  void parse_via_scan() {
    log::warn("cross-reference data unusable; scanning file for objects");
    std::size_t i = 0;
    while (i < buf_.size()) {
      if (!std::isdigit(static_cast<unsigned char>(buf_[i])) ||
          (i > 0 && !is_pdf_whitespace(buf_[i - 1]) && !is_pdf_delimiter(buf_[i - 1]))) {
        ++i;
        continue;
      }
      Lexer probe(buf_, i);
      const auto num = probe.try_number();
      const auto gen = probe.try_number();
      if (!num || !gen || *num < 0 || *gen < 0 || !probe.try_keyword("obj")) {
        ++i;
        continue;
      }
      try {
        auto [onum, obj, end] = parse_indirect_at(i);
        doc_.objects[onum] = std::move(obj);  // later revisions overwrite
        i = end;
      } catch (const Error&) {
        ++i;
      }
    }
    // Unpack any compressed object streams found during the scan.
    for (const auto& [onum, obj] : std::map<int, Object>(doc_.objects)) {
      (void)onum;
      if (!obj.is_stream()) continue;
      const Object* type = obj.stream().dict.find("Type");
      if (type && type->is_name() && type->name() == "ObjStm") {
        try {
          expand_objstm(obj.stream(), /*overwrite=*/false);
        } catch (const Error& e) {
          log::warn(std::string("skipping unreadable object stream: ") + e.what());
        }
      }
    }
    recover_trailer();
  }

  void recover_trailer() {
    // Prefer an explicit trailer dictionary, searching newest-first.
    std::size_t at = buf_.rfind("trailer");
    while (at != npos) {
      try {
        Lexer lex(buf_, at + 7);
        Object t = lex.parse_object();
        if (t.is_dict()) {
          for (const auto& [key, value] : t.dict().items)
            if (key != "Prev" && key != "XRefStm" && !doc_.trailer.has(key))
              doc_.trailer.set(key, value);
          break;
        }
      } catch (const Error&) {
      }
      at = at == 0 ? npos : buf_.rfind("trailer", at - 1);
    }
    // Xref streams double as trailers.
    for (const auto& [onum, obj] : doc_.objects) {
      (void)onum;
      if (!obj.is_stream()) continue;
      const Object* type = obj.stream().dict.find("Type");
      if (type && type->is_name() && type->name() == "XRef")
        for (const auto& [key, value] : obj.stream().dict.items)
          if ((key == "Root" || key == "Info" || key == "Encrypt" || key == "ID") &&
              !doc_.trailer.has(key))
            doc_.trailer.set(key, value);
    }
    if (!doc_.trailer.has("Root")) {
      for (const auto& [onum, obj] : doc_.objects) {
        if (!obj.is_dict()) continue;
        const Object* type = obj.dict().find("Type");
        if (type && type->is_name() && type->name() == "Catalog") {
          doc_.trailer.set("Root", Object{Ref{onum, 0}});
          break;
        }
      }
    }
  }

  std::string_view buf_;
  Document doc_;
  std::map<int, std::optional<XrefEntry>> entries_;
  std::set<int> expanded_containers_;
};

}  // namespace

Document read_document(std::string_view bytes) { return FileParser(bytes).parse(); }

}  // namespace reviewaudit::pdf
