#include "rasum/corpus.hpp"

#include "rasum/text.hpp"

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace rasum::corpus {

namespace fs = std::filesystem;
namespace pt = boost::property_tree;

namespace {

pt::ptree read_xml_file(const fs::path& path) {
  pt::ptree tree;
  try {
    pt::read_xml(path.string(), tree, pt::xml_parser::trim_whitespace);
  } catch (const pt::xml_parser_error& e) {
    throw ParseError(e.filename() + ":" + std::to_string(e.line()) + ": " + e.message());
  }
  return tree;
}

std::vector<std::string> sentence_texts(const pt::ptree& container, const fs::path& file) {
  std::vector<std::string> out;
  bool has_s = false;
  for (const auto& [name, child] : container) {
    if (name != "S") continue;
    has_s = true;
    std::string s = text::normalize_whitespace(child.get_value<std::string>());
    if (!s.empty()) out.push_back(std::move(s));
  }
  if (!has_s) {
    // Paragraph storage: fall back to sentence splitting.
    std::string body = text::normalize_whitespace(container.get_value<std::string>());
    if (!body.empty()) out = text::split_sentences(body);
  }
  if (out.empty()) {
    throw ParseError(file.string() + ": no sentence content found");
  }
  return out;
}

NewsDocument load_news_doc(const fs::path& file) {
  pt::ptree tree = read_xml_file(file);
  auto doc = tree.get_child_optional("DOC");
  if (!doc) throw ParseError(file.string() + ": missing <DOC> root element");

  NewsDocument out;
  out.id = doc->get<std::string>("<xmlattr>.id", file.stem().string());
  out.source = doc->get<std::string>("<xmlattr>.source", "");
  if (auto date = doc->get_optional<std::string>("<xmlattr>.date")) out.timestamp = *date;

  auto body = doc->get_child_optional("TEXT");
  if (!body) throw ParseError(file.string() + ": missing <TEXT> element");
  int index = 0;
  for (auto& raw : sentence_texts(*body, file)) {
    Sentence s;
    s.doc_id = out.id;
    s.index = index++;
    s.raw = raw;
    s.tokens = text::tokenize(raw);
    if (s.tokens.empty()) {
      log_warning(file.string() + ": sentence " + std::to_string(s.index) + " has no word tokens; skipped");
      --index;
      continue;
    }
    out.sentences.push_back(std::move(s));
  }
  if (out.sentences.empty()) {
    throw InvalidInputError(file.string() + ": document has no sentences");
  }
  return out;
}

std::vector<CommentSentence> load_comments(const fs::path& file) {
  pt::ptree tree = read_xml_file(file);
  auto root = tree.get_child_optional("COMMENTS");
  if (!root) throw ParseError(file.string() + ": missing <COMMENTS> root element");

  std::vector<CommentSentence> out;
  int auto_id = 0;
  for (const auto& [name, c] : *root) {
    if (name != "C") continue;
    std::string cid = c.get<std::string>("<xmlattr>.id", "c" + std::to_string(auto_id));
    ++auto_id;
    for (const auto& [cname, s] : c) {
      if (cname != "S") continue;
      CommentSentence cs;
      cs.comment_id = cid;
      cs.raw = text::normalize_whitespace(s.get_value<std::string>());
      cs.tokens = text::tokenize(cs.raw);
      if (!cs.tokens.empty()) out.push_back(std::move(cs));
    }
  }
  return out;
}

std::vector<std::string> load_summary(const fs::path& file) {
  pt::ptree tree = read_xml_file(file);
  auto root = tree.get_child_optional("SUMMARY");
  if (!root) throw ParseError(file.string() + ": missing <SUMMARY> root element");
  std::vector<std::string> tokens;
  for (auto& raw : sentence_texts(*root, file)) {
    auto toks = text::tokenize(raw);
    tokens.insert(tokens.end(), toks.begin(), toks.end());
  }
  return tokens;
}

std::vector<fs::path> sorted_files(const fs::path& dir, const std::string& ext) {
  std::vector<fs::path> files;
  if (!fs::exists(dir)) return files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ext) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });
  return files;
}

void attach_parses(Topic& topic, const fs::path& parses_dir) {
  if (!fs::exists(parses_dir)) return;
  for (auto& doc : topic.documents) {
    fs::path file = parses_dir / (doc.id + ".txt");
    if (!fs::exists(file)) continue;
    std::ifstream in(file);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(text::normalize_whitespace(line));
    if (lines.size() != doc.sentences.size()) {
      throw InvalidInputError(file.string() + ": " + std::to_string(lines.size()) +
                              " parse lines for " + std::to_string(doc.sentences.size()) +
                              " sentences in document " + doc.id);
    }
    for (size_t i = 0; i < lines.size(); ++i) {
      if (!lines[i].empty()) doc.sentences[i].parse = lines[i];
    }
  }
}

bool is_capitalized(const std::string& token) {
  return !token.empty() && std::isupper(static_cast<unsigned char>(token[0])) != 0;
}

std::string join(const std::vector<std::string>& parts, size_t begin, size_t end,
                 const std::string& sep) {
  std::string out;
  for (size_t i = begin; i < end; ++i) {
    if (i > begin) out += sep;
    out += parts[i];
  }
  return out;
}

// Entity terms: maximal runs of capitalized tokens in the raw text, excluding
// single capitalized tokens at sentence start, lowercased and joined with '_'.
std::vector<std::string> entity_terms(const std::string& raw) {
  std::vector<std::string> cased = text::tokenize_preserve_case(raw);
  std::vector<std::string> out;
  size_t i = 0;
  while (i < cased.size()) {
    if (!is_capitalized(cased[i])) {
      ++i;
      continue;
    }
    size_t j = i;
    while (j < cased.size() && is_capitalized(cased[j])) ++j;
    const size_t len = j - i;
    if (!(i == 0 && len == 1)) {
      out.push_back(text::to_lower(join(cased, i, j, "_")));
    }
    i = j;
  }
  return out;
}

}  // namespace

std::string category_name(Category c) {
  switch (c) {
    case Category::AccidentsAndNaturalDisasters: return "accidents_and_natural_disasters";
    case Category::Attacks: return "attacks";
    case Category::NewTechnology: return "new_technology";
    case Category::HealthAndSafety: return "health_and_safety";
    case Category::EndangeredResources: return "endangered_resources";
    case Category::InvestigationsAndTrials: return "investigations_and_trials";
  }
  return "new_technology";
}

std::optional<Category> parse_category(const std::string& name) {
  static const std::map<std::string, Category> table = {
      {"accidents_and_natural_disasters", Category::AccidentsAndNaturalDisasters},
      {"attacks", Category::Attacks},
      {"new_technology", Category::NewTechnology},
      {"health_and_safety", Category::HealthAndSafety},
      {"endangered_resources", Category::EndangeredResources},
      {"investigations_and_trials", Category::InvestigationsAndTrials},
  };
  auto it = table.find(text::to_lower(text::normalize_whitespace(name)));
  if (it == table.end()) return std::nullopt;
  return it->second;
}

int Topic::news_sentence_count() const {
  int n = 0;
  for (const auto& d : documents) n += static_cast<int>(d.sentences.size());
  return n;
}

std::vector<const Sentence*> Topic::all_sentences() const {
  std::vector<const Sentence*> out;
  out.reserve(news_sentence_count());
  for (const auto& d : documents) {
    for (const auto& s : d.sentences) out.push_back(&s);
  }
  return out;
}

uint64_t Vocabulary::hash() const {
  uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](unsigned char c) {
    h ^= c;
    h *= 0x100000001b3ULL;
  };
  for (const auto& t : terms) {
    for (unsigned char c : t) mix(c);
    mix('\n');
  }
  return h;
}

Topic load_topic(const fs::path& dir) {
  if (!fs::is_directory(dir)) {
    throw InvalidInputError("topic directory not found: " + dir.string());
  }
  Topic topic;
  topic.id = dir.filename().string();
  if (topic.id.empty()) topic.id = dir.parent_path().filename().string();

  for (const auto& file : sorted_files(dir / "news", ".xml")) {
    topic.documents.push_back(load_news_doc(file));
  }
  if (topic.documents.empty()) {
    throw InvalidInputError("topic has no news documents: " + dir.string());
  }

  const fs::path comments_file = dir / "comments.xml";
  if (fs::exists(comments_file)) {
    topic.comments = load_comments(comments_file);
  } else {
    log_warning("no comments.xml in " + dir.string() + "; proceeding comment-free");
  }

  for (const auto& file : sorted_files(dir / "summaries", ".xml")) {
    topic.model_summaries.push_back(load_summary(file));
  }

  attach_parses(topic, dir / "parses");

  const fs::path category_file = dir / "category.txt";
  if (fs::exists(category_file)) {
    std::ifstream in(category_file);
    std::string name((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    auto cat = parse_category(name);
    if (!cat) throw InvalidInputError(category_file.string() + ": unknown category '" + name + "'");
    topic.category = *cat;
  }
  return topic;
}

std::vector<std::string> sentence_terms(const std::vector<std::string>& tokens,
                                        const std::string& raw) {
  std::set<std::string> terms;
  for (const auto& t : tokens) {
    if (!text::is_stopword(t)) terms.insert(t);
  }
  for (size_t i = 0; i + 1 < tokens.size(); ++i) {
    if (text::is_stopword(tokens[i]) || text::is_stopword(tokens[i + 1])) continue;
    terms.insert(tokens[i] + "_" + tokens[i + 1]);
  }
  for (auto& e : entity_terms(raw)) terms.insert(std::move(e));
  return {terms.begin(), terms.end()};
}

Vocabulary build_vocabulary(const Topic& topic, int min_df) {
  if (min_df < 1) throw InvalidInputError("min_df must be >= 1");
  std::map<std::string, int> df;
  auto count = [&df](const std::vector<std::string>& tokens, const std::string& raw) {
    for (const auto& term : sentence_terms(tokens, raw)) ++df[term];
  };
  for (const auto* s : topic.all_sentences()) count(s->tokens, s->raw);
  for (const auto& c : topic.comments) count(c.tokens, c.raw);

  std::vector<std::pair<std::string, int>> kept;
  for (const auto& [term, n] : df) {
    if (n >= min_df) kept.emplace_back(term, n);
  }
  if (kept.empty()) {
    throw InvalidInputError("vocabulary is empty at min_df=" + std::to_string(min_df));
  }
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });

  Vocabulary vocab;
  vocab.terms.reserve(kept.size());
  for (size_t i = 0; i < kept.size(); ++i) {
    vocab.terms.push_back(kept[i].first);
    vocab.index.emplace(kept[i].first, static_cast<int>(i));
  }
  return vocab;
}

namespace {

VectorizeResult vectorize_rows(const std::vector<std::vector<std::string>>& term_sets,
                               const Vocabulary& vocab, BowMatrix::Kind kind,
                               const std::vector<std::string>& labels) {
  if (vocab.size() == 0) throw InvalidInputError("cannot vectorize with an empty vocabulary");
  std::vector<std::vector<int>> hits;
  std::vector<int> row_map;
  for (size_t i = 0; i < term_sets.size(); ++i) {
    std::vector<int> cols;
    for (const auto& term : term_sets[i]) {
      auto it = vocab.index.find(term);
      if (it != vocab.index.end()) cols.push_back(it->second);
    }
    if (cols.empty()) {
      log_warning("sentence with no in-vocabulary terms dropped: " + labels[i]);
      continue;
    }
    hits.push_back(std::move(cols));
    row_map.push_back(static_cast<int>(i));
  }
  VectorizeResult out;
  out.matrix.kind = kind;
  out.matrix.data = Matrix::Zero(static_cast<Eigen::Index>(hits.size()), vocab.size());
  for (size_t r = 0; r < hits.size(); ++r) {
    for (int c : hits[r]) out.matrix.data(static_cast<Eigen::Index>(r), c) = 1.0;
  }
  out.row_to_sentence = std::move(row_map);
  return out;
}

}  // namespace

VectorizeResult vectorize(const std::vector<const Sentence*>& sentences, const Vocabulary& vocab) {
  std::vector<std::vector<std::string>> term_sets;
  std::vector<std::string> labels;
  term_sets.reserve(sentences.size());
  for (const auto* s : sentences) {
    term_sets.push_back(sentence_terms(s->tokens, s->raw));
    labels.push_back(s->doc_id + "#" + std::to_string(s->index));
  }
  return vectorize_rows(term_sets, vocab, BowMatrix::Kind::News, labels);
}

VectorizeResult vectorize(const std::vector<CommentSentence>& comments, const Vocabulary& vocab) {
  std::vector<std::vector<std::string>> term_sets;
  std::vector<std::string> labels;
  term_sets.reserve(comments.size());
  for (size_t i = 0; i < comments.size(); ++i) {
    term_sets.push_back(sentence_terms(comments[i].tokens, comments[i].raw));
    labels.push_back(comments[i].comment_id + "#" + std::to_string(i));
  }
  return vectorize_rows(term_sets, vocab, BowMatrix::Kind::Comment, labels);
}

}  // namespace rasum::corpus
