#include "sdp/vocab.hpp"

#include <algorithm>
#include <utility>

#include "sdp/error.hpp"

namespace sdp {
namespace {

const std::string kUnknownToken = "<UNK>";
const std::string kTopToken = "<TOP>";

std::vector<std::string> rank(const std::map<std::string, int>& counts, int min_count) {
  std::vector<std::pair<std::string, int>> items;
  for (const auto& [key, count] : counts)
    if (count >= min_count) items.emplace_back(key, count);
  std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::vector<std::string> out;
  out.reserve(items.size());
  for (auto& item : items) out.push_back(std::move(item.first));
  return out;
}

}  // namespace

Vocabulary::Vocabulary()
    : forms_{kUnknownToken, kTopToken}, tags_{kUnknownToken, kTopToken}, labels_{kTopLabel} {
  reindex();
}

Vocabulary Vocabulary::build(const std::vector<AnnotatedSentence>& corpus, int min_count) {
  std::map<std::string, int> forms, tags, labels;
  for (const auto& item : corpus) {
    for (const auto& tok : item.sentence.words) {
      ++forms[tok.form];
      ++tags[tok.pos];
    }
    for (const auto& [edge, label] : item.graph.edges()) ++labels[label];
  }
  // Reserved spellings never get a second id.
  forms.erase(kUnknownToken);
  forms.erase(kTopToken);
  tags.erase(kUnknownToken);
  tags.erase(kTopToken);
  labels.erase(kTopLabel);

  Vocabulary v;
  v.min_count_ = min_count;
  for (auto& f : rank(forms, min_count)) v.forms_.push_back(std::move(f));
  for (auto& t : rank(tags, 1)) v.tags_.push_back(std::move(t));
  for (auto& l : rank(labels, 1)) v.labels_.push_back(std::move(l));
  v.reindex();
  return v;
}

Vocabulary Vocabulary::from_lists(std::vector<std::string> forms, std::vector<std::string> tags,
                                  std::vector<std::string> labels, int min_count) {
  if (forms.size() < 2 || forms[0] != kUnknownToken || forms[1] != kTopToken ||
      tags.size() < 2 || tags[0] != kUnknownToken || tags[1] != kTopToken || labels.empty() ||
      labels[0] != kTopLabel)
    throw DataError("vocabulary lists are missing reserved entries");
  Vocabulary v;
  v.min_count_ = min_count;
  v.forms_ = std::move(forms);
  v.tags_ = std::move(tags);
  v.labels_ = std::move(labels);
  v.reindex();
  if (v.form_ids_.size() != v.forms_.size() || v.tag_ids_.size() != v.tags_.size() ||
      v.label_ids_.size() != v.labels_.size())
    throw DataError("vocabulary lists contain duplicates");
  return v;
}

void Vocabulary::reindex() {
  form_ids_.clear();
  tag_ids_.clear();
  label_ids_.clear();
  for (std::size_t i = 0; i < forms_.size(); ++i) form_ids_.emplace(forms_[i], static_cast<int>(i));
  for (std::size_t i = 0; i < tags_.size(); ++i) tag_ids_.emplace(tags_[i], static_cast<int>(i));
  for (std::size_t i = 0; i < labels_.size(); ++i)
    label_ids_.emplace(labels_[i], static_cast<int>(i));
}

int Vocabulary::form_id(const std::string& form) const {
  auto it = form_ids_.find(form);
  return it == form_ids_.end() ? kUnknown : it->second;
}

int Vocabulary::pos_id(const std::string& pos) const {
  auto it = tag_ids_.find(pos);
  return it == tag_ids_.end() ? kUnknown : it->second;
}

int Vocabulary::label_id(const std::string& label) const {
  auto it = label_ids_.find(label);
  if (it == label_ids_.end()) throw DataError("label '" + label + "' is not in the vocabulary");
  return it->second;
}

}  // namespace sdp
