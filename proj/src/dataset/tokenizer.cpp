//
// Project PagForge - Copyright 2026 PagForge Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "pagforge/dataset/tokenizer.h"

#include <cctype>
#include <set>

namespace pagforge::data {

std::vector<std::string> lex_smiles(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (c == '[') {
      auto close = s.find(']', i);
      if (close == std::string_view::npos)
        throw InvalidArgument("unterminated bracket atom at "
                              + std::to_string(i));
      out.emplace_back(s.substr(i, close - i + 1));
      i = close + 1;
    } else if (c == '%') {
      if (i + 2 >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i + 1]))
          || !std::isdigit(static_cast<unsigned char>(s[i + 2])))
        throw InvalidArgument("truncated ring label at " + std::to_string(i));
      out.emplace_back(s.substr(i, 3));
      i += 3;
    } else if ((c == 'B' && i + 1 < s.size() && s[i + 1] == 'r')
               || (c == 'C' && i + 1 < s.size() && s[i + 1] == 'l')) {
      out.emplace_back(s.substr(i, 2));
      i += 2;
    } else {
      out.emplace_back(1, c);
      ++i;
    }
  }
  return out;
}

Vocabulary::Vocabulary() {
  add("<pad>");
  add("<s>");
  add("</s>");
}

void Vocabulary::add(const std::string &token) {
  if (index_.count(token))
    return;
  index_[token] = static_cast<int>(tokens_.size());
  tokens_.push_back(token);
}

Vocabulary Vocabulary::build(const std::vector<std::string> &corpus) {
  std::set<std::string> seen;
  for (const auto &s: corpus) {
    for (auto &t: lex_smiles(s))
      seen.insert(std::move(t));
  }
  Vocabulary v;
  for (const auto &t: seen)
    v.add(t);
  return v;
}

Vocabulary Vocabulary::from_json(const nlohmann::json &j) {
  auto tokens = j.at("tokens").get<std::vector<std::string>>();
  if (tokens.size() < 3 || tokens[0] != "<pad>" || tokens[1] != "<s>"
      || tokens[2] != "</s>")
    throw InvalidArgument("vocabulary must start with <pad>, <s>, </s>");
  Vocabulary v;
  for (std::size_t i = 3; i < tokens.size(); ++i)
    v.add(tokens[i]);
  if (v.size() != static_cast<int>(tokens.size()))
    throw InvalidArgument("vocabulary contains duplicate tokens");
  return v;
}

nlohmann::json Vocabulary::to_json() const {
  return { { "tokens", tokens_ } };
}

int Vocabulary::id(const std::string &token) const {
  auto it = index_.find(token);
  return it == index_.end() ? -1 : it->second;
}

std::vector<int> Vocabulary::encode(std::string_view smiles,
                                    int max_tokens) const {
  auto tokens = lex_smiles(smiles);
  if (static_cast<int>(tokens.size()) > max_tokens)
    throw Overlength(std::to_string(tokens.size()) + " tokens exceed the limit of "
                     + std::to_string(max_tokens));
  std::vector<int> ids { kStart };
  for (const auto &t: tokens) {
    int k = id(t);
    if (k < 3)
      throw OutOfVocabulary("token '" + t + "' is not in the vocabulary");
    ids.push_back(k);
  }
  ids.push_back(kEnd);
  return ids;
}

std::string Vocabulary::decode(const std::vector<int> &ids) const {
  std::string out;
  for (int k: ids) {
    if (k == kEnd)
      break;
    if (k == kPad || k == kStart || k < 0 || k >= size())
      continue;
    out += tokens_[k];
  }
  return out;
}

} // namespace pagforge::data
