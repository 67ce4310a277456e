#pragma once

#include <map>
#include <string>
#include <vector>

#include "sdp/sdp_format.hpp"

namespace sdp {

// String <-> id tables for forms, POS tags and edge labels.
//
// Forms and tags reserve id 0 for the unknown token and id 1 for TOP; labels
// reserve id 0 for the TOP label. Remaining ids are assigned by descending
// corpus frequency, ties broken lexicographically, so construction does not
// depend on hash order or platform.
class Vocabulary {
 public:
  static constexpr int kUnknown = 0;
  static constexpr int kTop = 1;
  static constexpr int kTopLabelId = 0;
  static constexpr int kDefaultMinCount = 7;

  Vocabulary();

  // Forms seen fewer than `min_count` times map to unknown. Tags and labels
  // have no cutoff.
  static Vocabulary build(const std::vector<AnnotatedSentence>& corpus,
                          int min_count = kDefaultMinCount);
  // Rebuilds from explicit id-ordered lists (checkpoint loading).
  static Vocabulary from_lists(std::vector<std::string> forms, std::vector<std::string> tags,
                               std::vector<std::string> labels, int min_count);

  int form_id(const std::string& form) const;
  int pos_id(const std::string& pos) const;
  // Throws DataError for labels outside the vocabulary.
  int label_id(const std::string& label) const;
  bool has_label(const std::string& label) const { return label_ids_.count(label) != 0; }

  const std::string& form(int id) const { return forms_.at(static_cast<std::size_t>(id)); }
  const std::string& pos(int id) const { return tags_.at(static_cast<std::size_t>(id)); }
  const std::string& label(int id) const { return labels_.at(static_cast<std::size_t>(id)); }

  int form_count() const { return static_cast<int>(forms_.size()); }
  int pos_count() const { return static_cast<int>(tags_.size()); }
  int label_count() const { return static_cast<int>(labels_.size()); }
  int min_count() const { return min_count_; }

  const std::vector<std::string>& forms() const { return forms_; }
  const std::vector<std::string>& tags() const { return tags_; }
  const std::vector<std::string>& labels() const { return labels_; }

  bool operator==(const Vocabulary&) const = default;

 private:
  void reindex();

  int min_count_ = kDefaultMinCount;
  std::vector<std::string> forms_, tags_, labels_;
  std::map<std::string, int> form_ids_, tag_ids_, label_ids_;
};

}  // namespace sdp
