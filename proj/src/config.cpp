// SPDX-License-Identifier: Apache-2.0
#include "lensleech/config.hpp"

#include "lensleech/error.hpp"
#include "lensleech/textio.hpp"

namespace lensleech {

KeyValueDoc KeyValueDoc::parse(std::string_view text) {
  KeyValueDoc doc;
  doc.blocks_.push_back(Block{});
  int lineno = 0;
  for (std::string_view raw : split_lines(text)) {
    ++lineno;
    std::string_view line = raw;
    // Strip comments that are not inside quotes.
    bool in_quotes = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') in_quotes = !in_quotes;
      if (line[i] == '#' && !in_quotes) {
        line = line.substr(0, i);
        break;
      }
    }
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) throw ParseError(lineno, 1, "malformed section header");
      Block b;
      b.name = std::string(trim(line.substr(1, line.size() - 2)));
      b.line = lineno;
      doc.blocks_.push_back(std::move(b));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(lineno, 1, "expected 'key = value'");
    const auto key = trim(line.substr(0, eq));
    auto value = trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError(lineno, 1, "empty key");
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    doc.blocks_.back().entries.emplace_back(std::string(key), std::string(value));
    doc.blocks_.back().entry_lines.push_back(lineno);
  }
  return doc;
}

const KeyValueDoc::Block* KeyValueDoc::find_block(const std::string& section) const {
  for (const auto& b : blocks_)
    if (b.name == section) return &b;
  return nullptr;
}

bool KeyValueDoc::has_section(const std::string& section) const { return find_block(section) != nullptr; }

const std::string* KeyValueDoc::find(const std::string& section, const std::string& key, int* line) const {
  const Block* b = find_block(section);
  if (!b) return nullptr;
  // Last assignment wins.
  for (std::size_t i = b->entries.size(); i-- > 0;) {
    if (b->entries[i].first == key) {
      if (line) *line = b->entry_lines[i];
      return &b->entries[i].second;
    }
  }
  return nullptr;
}

bool KeyValueDoc::has(const std::string& section, const std::string& key) const {
  return find(section, key, nullptr) != nullptr;
}

std::string KeyValueDoc::get_string(const std::string& section, const std::string& key,
                                    const std::string& fallback) const {
  const std::string* v = find(section, key, nullptr);
  return v ? *v : fallback;
}

double KeyValueDoc::get_double(const std::string& section, const std::string& key, double fallback) const {
  int line = 0;
  const std::string* v = find(section, key, &line);
  if (!v) return fallback;
  double d = 0.0;
  if (!parse_double(*v, d)) throw ParseError(line, 2, "'" + key + "' is not a number");
  return d;
}

long long KeyValueDoc::get_int(const std::string& section, const std::string& key, long long fallback) const {
  int line = 0;
  const std::string* v = find(section, key, &line);
  if (!v) return fallback;
  long long i = 0;
  if (!parse_int(*v, i)) throw ParseError(line, 2, "'" + key + "' is not an integer");
  return i;
}

bool KeyValueDoc::get_bool(const std::string& section, const std::string& key, bool fallback) const {
  int line = 0;
  const std::string* v = find(section, key, &line);
  if (!v) return fallback;
  if (*v == "true" || *v == "1") return true;
  if (*v == "false" || *v == "0") return false;
  throw ParseError(line, 2, "'" + key + "' is not a boolean");
}

std::vector<std::string> KeyValueDoc::get_list(const std::string& section, const std::string& key) const {
  std::vector<std::string> out;
  const std::string* v = find(section, key, nullptr);
  if (!v) return out;
  std::string_view s = *v;
  if (s.size() >= 2 && s.front() == '[' && s.back() == ']') s = s.substr(1, s.size() - 2);
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto comma = s.find(',', start);
    auto item = trim(s.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (item.size() >= 2 && item.front() == '"' && item.back() == '"') item = item.substr(1, item.size() - 2);
    if (!item.empty()) out.emplace_back(item);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

KeyValueDoc KeyValueDoc::from_block(const Block& b) {
  KeyValueDoc doc;
  Block top = b;
  top.name.clear();
  doc.blocks_.push_back(std::move(top));
  return doc;
}

std::vector<std::string> KeyValueDoc::keys(const std::string& section) const {
  std::vector<std::string> out;
  if (const Block* b = find_block(section))
    for (const auto& e : b->entries) out.push_back(e.first);
  return out;
}

} // namespace lensleech
