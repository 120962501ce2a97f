#include "rasum/corpus.hpp"
#include "rasum/text.hpp"

#include <doctest.h>

#include "testutil.hpp"

#include <set>

using namespace rasum;
using testutil::TempDir;
using testutil::write_file;

namespace {

corpus::Sentence make_sentence(const std::string& doc_id, int index, const std::string& raw) {
  corpus::Sentence s;
  s.doc_id = doc_id;
  s.index = index;
  s.raw = raw;
  s.tokens = text::tokenize(raw);
  return s;
}

// Four-sentence fixture used for the hand-enumerated vocabulary.
corpus::Topic fixture_topic() {
  corpus::Topic t;
  t.id = "fixture";
  corpus::NewsDocument d;
  d.id = "d1";
  d.sentences.push_back(make_sentence("d1", 0, "Bitcoin fell sharply."));
  d.sentences.push_back(make_sentence("d1", 1, "Bitcoin price fell."));
  d.sentences.push_back(make_sentence("d1", 2, "The price fell again."));
  d.sentences.push_back(make_sentence("d1", 3, "Traders sold bitcoin."));
  t.documents.push_back(std::move(d));
  return t;
}

}  // namespace

TEST_CASE("tokenizer lowercases and keeps internal apostrophes and hyphens") {
  CHECK(text::tokenize("Bitcoin's price, it fell!") ==
        std::vector<std::string>{"bitcoin's", "price", "it", "fell"});
  CHECK(text::tokenize("A state-of-the-art e-mail") ==
        std::vector<std::string>{"a", "state-of-the-art", "e-mail"});
  CHECK(text::tokenize("...") == std::vector<std::string>{});
}

TEST_CASE("sentence splitter honors the abbreviation guard") {
  auto s = text::split_sentences(
      "The price fell. Traders sold quickly. Mr. Smith said it was over.");
  REQUIRE(s.size() == 3);
  CHECK(s[0] == "The price fell.");
  CHECK(s[1] == "Traders sold quickly.");
  CHECK(s[2] == "Mr. Smith said it was over.");

  auto us = text::split_sentences("The U.S. Senate met. It adjourned.");
  REQUIRE(us.size() == 2);
  CHECK(us[0] == "The U.S. Senate met.");
}

TEST_CASE("sentence_terms: unigrams, bigrams, entity runs") {
  auto terms = corpus::sentence_terms(text::tokenize("Sony showed Project Morpheus at the show"),
                                      "Sony showed Project Morpheus at the show");
  std::set<std::string> set(terms.begin(), terms.end());
  CHECK(set.count("sony") == 1);            // unigram (initial single run excluded as entity)
  CHECK(set.count("project_morpheus") == 1);  // capitalized run
  CHECK(set.count("the") == 0);             // stopword
  CHECK(set.count("project_morpheus_at") == 0);

  auto mt = corpus::sentence_terms(text::tokenize("Mt. Gox went offline"), "Mt. Gox went offline");
  std::set<std::string> mt_set(mt.begin(), mt.end());
  CHECK(mt_set.count("mt_gox") == 1);  // sentence-initial run of length 2 counts
}

TEST_CASE("build_vocabulary matches the hand-enumerated fixture") {
  corpus::Topic t = fixture_topic();
  corpus::Vocabulary v = corpus::build_vocabulary(t, 2);
  CHECK(v.terms == std::vector<std::string>{"bitcoin", "fell", "price", "price_fell"});
  CHECK(v.index.at("bitcoin") == 0);
  CHECK(v.index.at("price_fell") == 3);

  SUBCASE("df threshold excludes rare terms") {
    CHECK(v.index.count("sharply") == 0);  // appears once
    corpus::Vocabulary v1 = corpus::build_vocabulary(t, 1);
    CHECK(v1.index.count("sharply") == 1);
  }
  SUBCASE("empty vocabulary is an error") {
    CHECK_THROWS_AS(corpus::build_vocabulary(t, 100), InvalidInputError);
  }
}

TEST_CASE("vectorize produces the hand-computed indicator rows") {
  corpus::Topic t = fixture_topic();
  corpus::Vocabulary v = corpus::build_vocabulary(t, 2);  // [bitcoin, fell, price, price_fell]
  auto rows = corpus::vectorize(t.all_sentences(), v);
  REQUIRE(rows.matrix.rows() == 4);
  Matrix expected(4, 4);
  expected << 1, 1, 0, 0,  //
      1, 1, 1, 1,          //
      0, 1, 1, 1,          //
      1, 0, 0, 0;
  CHECK(rows.matrix.data == expected);
  CHECK(rows.row_to_sentence == std::vector<int>{0, 1, 2, 3});

  SUBCASE("direct indicator example") {
    corpus::Vocabulary small;
    small.terms = {"bitcoin", "price", "gox"};
    for (int i = 0; i < 3; ++i) small.index.emplace(small.terms[i], i);
    corpus::Topic t2;
    corpus::NewsDocument d;
    d.id = "x";
    d.sentences.push_back(make_sentence("x", 0, "bitcoin price"));
    t2.documents.push_back(d);
    auto r = corpus::vectorize(t2.all_sentences(), small);
    Matrix e(1, 3);
    e << 1, 1, 0;
    CHECK(r.matrix.data == e);
  }

  SUBCASE("sentences with no in-vocabulary terms are dropped and mapped") {
    corpus::Topic t2 = fixture_topic();
    t2.documents[0].sentences.insert(t2.documents[0].sentences.begin() + 1,
                                     make_sentence("d1", 9, "Hello world"));
    auto r = corpus::vectorize(t2.all_sentences(), v);
    CHECK(r.matrix.rows() == 4);
    CHECK(r.row_to_sentence == std::vector<int>{0, 2, 3, 4});
  }
}

TEST_CASE("vectorize round-trips the in-vocabulary term set") {
  corpus::Topic t = fixture_topic();
  corpus::Vocabulary v = corpus::build_vocabulary(t, 2);
  auto rows = corpus::vectorize(t.all_sentences(), v);
  auto sentences = t.all_sentences();
  for (Eigen::Index r = 0; r < rows.matrix.rows(); ++r) {
    const auto* s = sentences[static_cast<size_t>(rows.row_to_sentence[static_cast<size_t>(r)])];
    std::set<std::string> expected;
    for (const auto& term : corpus::sentence_terms(s->tokens, s->raw)) {
      if (v.index.count(term) > 0) expected.insert(term);
    }
    std::set<std::string> decoded;
    for (Eigen::Index c = 0; c < rows.matrix.cols(); ++c) {
      const double entry = rows.matrix.data(r, c);
      CHECK((entry == 0.0 || entry == 1.0));
      if (entry == 1.0) decoded.insert(v.terms[static_cast<size_t>(c)]);
    }
    CHECK(decoded == expected);
  }
}

TEST_CASE("load_topic reads the XML layout") {
  TempDir dir("topic");
  const auto root = dir.path() / "event";
  for (int i = 0; i < 10; ++i) {
    const std::string id = "d" + std::to_string(i);
    write_file(root / "news" / (id + ".xml"),
               testutil::news_xml(id, {"Bitcoin fell.", "Traders sold bitcoin."}, "2014-02-0" +
                                                                                    std::to_string(i % 9 + 1)));
  }
  write_file(root / "comments.xml",
             testutil::comments_xml({{"I sold my bitcoin."}, {"The price will recover."}}));
  write_file(root / "summaries" / "1.xml", testutil::summary_xml({"Bitcoin fell."}));

  corpus::Topic t = corpus::load_topic(root);
  CHECK(t.id == "event");
  CHECK(t.documents.size() == 10);
  CHECK(t.news_sentence_count() == 20);
  CHECK(t.comments.size() == 2);
  CHECK(t.model_summaries.size() == 1);
  CHECK(t.documents[0].id == "d0");
  CHECK(t.documents[0].timestamp == "2014-02-01");
  CHECK(t.comments[0].comment_id == "c0");

  SUBCASE("document order is lexicographic by file name") {
    std::vector<std::string> ids;
    for (const auto& d : t.documents) ids.push_back(d.id);
    auto sorted = ids;
    std::sort(sorted.begin(), sorted.end());
    CHECK(ids == sorted);
  }
}

TEST_CASE("load_topic error and fallback paths") {
  SUBCASE("empty topic directory") {
    TempDir dir("empty");
    std::filesystem::create_directories(dir.path() / "t" / "news");
    CHECK_THROWS_AS(corpus::load_topic(dir.path() / "t"), InvalidInputError);
  }
  SUBCASE("malformed XML reports the file") {
    TempDir dir("bad");
    write_file(dir.path() / "t" / "news" / "d0.xml", "<DOC><TEXT><S>broken");
    try {
      corpus::load_topic(dir.path() / "t");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("d0.xml") != std::string::npos);
    }
  }
  SUBCASE("missing comments.xml proceeds comment-free") {
    TempDir dir("nocom");
    write_file(dir.path() / "t" / "news" / "d0.xml", testutil::news_xml("d0", {"Bitcoin fell."}));
    corpus::Topic t = corpus::load_topic(dir.path() / "t");
    CHECK(t.comments.empty());
  }
  SUBCASE("paragraph TEXT falls back to sentence splitting") {
    TempDir dir("para");
    write_file(dir.path() / "t" / "news" / "d0.xml",
               "<DOC id=\"d0\"><TEXT>The price fell. Traders sold quickly.</TEXT></DOC>");
    corpus::Topic t = corpus::load_topic(dir.path() / "t");
    REQUIRE(t.documents.size() == 1);
    CHECK(t.documents[0].sentences.size() == 2);
  }
  SUBCASE("parse files must align with sentence counts") {
    TempDir dir("parses");
    write_file(dir.path() / "t" / "news" / "d0.xml",
               testutil::news_xml("d0", {"Bitcoin fell.", "Traders sold."}));
    write_file(dir.path() / "t" / "parses" / "d0.txt", "(S (NP (NN bitcoin)) (VP (VBD fell)))\n");
    CHECK_THROWS_AS(corpus::load_topic(dir.path() / "t"), InvalidInputError);
    write_file(dir.path() / "t" / "parses" / "d0.txt",
               "(S (NP (NN bitcoin)) (VP (VBD fell)))\n(S (NP (NN traders)) (VP (VBD sold)))\n");
    corpus::Topic t = corpus::load_topic(dir.path() / "t");
    CHECK(t.documents[0].sentences[0].parse.has_value());
    CHECK(t.documents[0].sentences[1].parse.has_value());
  }
  SUBCASE("category.txt") {
    TempDir dir("cat");
    write_file(dir.path() / "t" / "news" / "d0.xml", testutil::news_xml("d0", {"Bitcoin fell."}));
    write_file(dir.path() / "t" / "category.txt", "new_technology\n");
    CHECK(corpus::load_topic(dir.path() / "t").category == corpus::Category::NewTechnology);
    write_file(dir.path() / "t" / "category.txt", "not_a_category\n");
    CHECK_THROWS_AS(corpus::load_topic(dir.path() / "t"), InvalidInputError);
  }
}

TEST_CASE("identical directories produce byte-identical vocabularies and matrices") {
  TempDir dir("deterministic");
  const auto root = dir.path() / "t";
  write_file(root / "news" / "d0.xml",
             testutil::news_xml("d0", {"Bitcoin fell sharply.", "Bitcoin price fell."}));
  write_file(root / "news" / "d1.xml",
             testutil::news_xml("d1", {"The price fell again.", "Traders sold bitcoin."}));
  write_file(root / "comments.xml", testutil::comments_xml({{"The bitcoin price fell."}}));

  corpus::Topic t1 = corpus::load_topic(root);
  corpus::Topic t2 = corpus::load_topic(root);
  corpus::Vocabulary v1 = corpus::build_vocabulary(t1, 2);
  corpus::Vocabulary v2 = corpus::build_vocabulary(t2, 2);
  CHECK(v1.terms == v2.terms);
  CHECK(v1.hash() == v2.hash());
  auto r1 = corpus::vectorize(t1.all_sentences(), v1);
  auto r2 = corpus::vectorize(t2.all_sentences(), v2);
  CHECK(r1.matrix.data == r2.matrix.data);
  auto c1 = corpus::vectorize(t1.comments, v1);
  auto c2 = corpus::vectorize(t2.comments, v2);
  CHECK(c1.matrix.data == c2.matrix.data);
}
