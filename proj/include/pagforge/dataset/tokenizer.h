//
// Project PagForge - Copyright 2026 PagForge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef PAGFORGE_DATASET_TOKENIZER_H_
#define PAGFORGE_DATASET_TOKENIZER_H_

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "pagforge/util/error.h"

namespace pagforge::data {

inline constexpr int kMaxTokens = 128;

class OutOfVocabulary: public InvalidArgument {
public:
  using InvalidArgument::InvalidArgument;
};

class Overlength: public InvalidArgument {
public:
  using InvalidArgument::InvalidArgument;
};

/// Splits SMILES into lexical tokens: bracket atoms, the two-letter
/// organic symbols Br and Cl, and %nn ring labels are single tokens; every
/// other character is its own token. Throws InvalidArgument on an
/// unterminated bracket or truncated %nn.
std::vector<std::string> lex_smiles(std::string_view smiles);

/// Token vocabulary with reserved ids pad = 0, start = 1, end = 2.
class Vocabulary {
public:
  static constexpr int kPad = 0;
  static constexpr int kStart = 1;
  static constexpr int kEnd = 2;

  Vocabulary();
  // Vocabulary over every token appearing in the corpus, sorted.
  static Vocabulary build(const std::vector<std::string> &corpus);
  static Vocabulary from_json(const nlohmann::json &j);
  nlohmann::json to_json() const;

  int size() const { return static_cast<int>(tokens_.size()); }
  const std::string &token(int id) const { return tokens_.at(id); }
  // -1 when absent.
  int id(const std::string &token) const;

  /// start, token ids, end. Throws OutOfVocabulary or Overlength (more
  /// than max_tokens content tokens).
  std::vector<int> encode(std::string_view smiles,
                          int max_tokens = kMaxTokens) const;
  // Concatenates tokens up to the first end id; pad and start are skipped.
  std::string decode(const std::vector<int> &ids) const;

  bool operator==(const Vocabulary &other) const {
    return tokens_ == other.tokens_;
  }

private:
  void add(const std::string &token);

  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> index_;
};

} // namespace pagforge::data

#endif // PAGFORGE_DATASET_TOKENIZER_H_
