// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace lensleech {

// Minimal TOML-style document: `[section]` headers, `key = value` lines, `#` comments.
// Values keep their raw text; quotes around strings are stripped.
class KeyValueDoc {
public:
  static KeyValueDoc parse(std::string_view text);

  bool has_section(const std::string& section) const;
  bool has(const std::string& section, const std::string& key) const;

  std::string get_string(const std::string& section, const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& section, const std::string& key, double fallback) const;
  long long get_int(const std::string& section, const std::string& key, long long fallback) const;
  bool get_bool(const std::string& section, const std::string& key, bool fallback) const;
  // Comma-separated list.
  std::vector<std::string> get_list(const std::string& section, const std::string& key) const;

  // Keys of one section in file order.
  std::vector<std::string> keys(const std::string& section) const;

  // Repeated sections (e.g. several [frame] blocks) are kept in order.
  struct Block {
    std::string name;
    int line = 0;
    std::vector<std::pair<std::string, std::string>> entries;
    std::vector<int> entry_lines;
  };
  const std::vector<Block>& blocks() const { return blocks_; }
  // A document whose top level holds the entries of one block.
  static KeyValueDoc from_block(const Block& b);

private:
  const Block* find_block(const std::string& section) const;
  const std::string* find(const std::string& section, const std::string& key, int* line) const;

  std::vector<Block> blocks_; // blocks_[0] is the unnamed top level
};

} // namespace lensleech
