#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "hancnn/encoding/alphabet.hpp"
#include "hancnn/encoding/embedding.hpp"
#include "hancnn/encoding/encoder.hpp"
#include "hancnn/nn/grad_check.hpp"
#include "hancnn/rng.hpp"

using namespace hancnn;
using namespace hancnn::encoding;
using Catch::Approx;

TEST_CASE("pinyin alphabet layout") {
    Alphabet a = build_pinyin_alphabet();
    CHECK(a.size() == 42);
    CHECK(a.index_of(U'a') == 1);
    CHECK(a.index_of(U'z') == 26);
    CHECK(a.index_of(U'0') == 27);
    CHECK(a.index_of(U'9') == 36);
    CHECK(a.index_of(U' ') == 41);
    CHECK(a.blank_index() == 42);
    CHECK_FALSE(a.contains(U'A'));   // no upper case
}

TEST_CASE("corpus alphabet collects distinct characters sorted by code point") {
    Alphabet a = build_corpus_alphabet({"甲乙甲"});
    CHECK(a.size() == 3);   // 甲, 乙, blank
    CHECK(a.contains(U'甲'));
    CHECK(a.contains(U'乙'));
    // 乙 (U+4E59) sorts before 甲 (U+7532)
    CHECK(a.index_of(U'乙') == 1);
    CHECK(a.index_of(U'甲') == 2);
    CHECK(a.blank_index() == 3);
}

TEST_CASE("corpus alphabet is order independent") {
    Alphabet a = build_corpus_alphabet({"cab", "bd"});
    Alphabet b = build_corpus_alphabet({"db", "abc"});
    CHECK(a.symbols() == b.symbols());
    CHECK(a.blank_index() == b.blank_index());
}

TEST_CASE("corpus alphabet rejects an empty corpus") {
    CHECK_THROWS_AS(build_corpus_alphabet(std::vector<std::string>{}),
                    std::invalid_argument);
    CHECK_THROWS_AS(build_corpus_alphabet({""}), std::invalid_argument);
}

TEST_CASE("encode reverses, pads, and maps OOV to blank") {
    Alphabet a = build_pinyin_alphabet();
    EncoderConfig cfg(5);
    CHECK(encode(std::string_view("ab"), a, cfg) ==
          std::vector<std::uint32_t>{2, 1, 0, 0, 0});

    auto euro = encode(std::string_view("€"), a, cfg);
    CHECK(euro[0] == 42);   // blank index

    // truncation keeps the first L characters
    EncoderConfig cfg3(3);
    auto t1 = encode(std::string_view("abcdefghij"), a, cfg3);
    auto t2 = encode(std::string_view("abcxxxxxxxxxxxxxx"), a, cfg3);
    CHECK(t1 == t2);
    CHECK(t1 == std::vector<std::uint32_t>{3, 2, 1});
}

TEST_CASE("encode output is always length L with entries in range") {
    Alphabet a = build_pinyin_alphabet();
    Rng rng(9);
    for (int trial = 0; trial < 200; ++trial) {
        std::u32string text;
        const std::size_t len = rng.below(40);
        for (std::size_t i = 0; i < len; ++i)
            text.push_back(static_cast<char32_t>(32 + rng.below(1000)));
        EncoderConfig cfg(1 + rng.below(30));
        auto out = encode(text, a, cfg);
        REQUIRE(out.size() == cfg.max_length);
        for (auto idx : out) REQUIRE(idx <= a.size());
    }
}

TEST_CASE("encode is a pure function") {
    Alphabet a = build_pinyin_alphabet();
    EncoderConfig cfg(12);
    const std::u32string text = U"ni hao ma?";
    CHECK(encode(text, a, cfg) == encode(text, a, cfg));
}

TEST_CASE("decode round-trips clean text") {
    Alphabet a = build_pinyin_alphabet();
    Rng rng(10);
    EncoderConfig cfg(24);
    for (int trial = 0; trial < 500; ++trial) {
        std::u32string text;
        const std::size_t len = rng.below(25);
        for (std::size_t i = 0; i < len; ++i)
            text.push_back(a.symbol(1 + rng.below(a.size())));
        auto encoded = encode(text, a, cfg);
        CHECK(decode(encoded, a) == text);
    }
}

TEST_CASE("alphabet file round trip is bit exact") {
    Alphabet a = build_pinyin_alphabet();
    const std::string path =
        (std::filesystem::temp_directory_path() / "hancnn_alphabet_test.txt").string();
    save_alphabet(a, path);

    std::ifstream raw(path, std::ios::binary);
    std::stringstream buf;
    buf << raw.rdbuf();
    const std::string bytes = buf.str();
    CHECK(bytes.substr(0, 2) == "a\n");         // no BOM
    CHECK(bytes.find('\r') == std::string::npos);   // LF only
    CHECK(bytes.find("\tBLANK\n") != std::string::npos);

    Alphabet b = load_alphabet(path);
    CHECK(b.symbols() == a.symbols());
    CHECK(b.blank_index() == a.blank_index());
    std::filesystem::remove(path);
}

TEST_CASE("alphabet loader rejects malformed files") {
    std::istringstream two_chars("ab\n");
    CHECK_THROWS_AS(load_alphabet(two_chars), ParseError);
    std::istringstream no_blank("a\nb\n");
    CHECK_THROWS_AS(load_alphabet(no_blank), ParseError);
}

TEST_CASE("embedding lookup of an all-pad sequence is the zero tensor") {
    Rng rng(3);
    EmbeddingTable table = make_embedding(5, 4, rng);
    std::vector<std::uint32_t> pads(7, 0);
    Tensor2D out = embed_forward(pads, table);
    for (double x : out.data) CHECK(x == 0.0);
}

TEST_CASE("embedding rejects out-of-range indices") {
    Rng rng(3);
    EmbeddingTable table = make_embedding(5, 4, rng);
    std::vector<std::uint32_t> bad = {6};
    CHECK_THROWS_AS(embed_forward(bad, table), std::invalid_argument);
}

TEST_CASE("embedding gradient accumulates repeated rows") {
    Tensor2D grad_out(2, 3);   // E=2, L=3
    grad_out.data = {1, 2, 3, 10, 20, 30};
    std::vector<std::uint32_t> indices = {4, 2, 4};
    Tensor2D g = embed_backward(indices, grad_out, 5);
    CHECK(g(4, 0) == 1 + 3);
    CHECK(g(4, 1) == 10 + 30);
    CHECK(g(2, 0) == 2);
    CHECK(g(2, 1) == 20);
    for (std::size_t e = 0; e < 2; ++e) CHECK(g(0, e) == 0.0);
}

TEST_CASE("embedding gradient matches finite differences on non-pad rows") {
    Rng rng(12);
    EmbeddingTable table = make_embedding(6, 3, rng);
    std::vector<std::uint32_t> indices = {1, 0, 4, 4, 6};
    Tensor2D proj(3, 5);
    for (double& x : proj.data) x = rng.uniform() * 2.0 - 1.0;

    Tensor2D analytic = embed_backward(indices, proj, 6);

    EmbeddingTable probe = table;
    auto loss = [&](std::span<const double> w) {
        probe.weights.data.assign(w.begin(), w.end());
        Tensor2D out = embed_forward(indices, probe);
        double s = 0.0;
        for (std::size_t i = 0; i < out.data.size(); ++i) s += out.data[i] * proj.data[i];
        return s;
    };
    std::vector<double> w = table.weights.data;
    auto skip_pad_row = [&](std::size_t i) { return i < table.dim; };
    auto rep =
        hancnn::nn::grad_check(loss, w, analytic.data, 1e-4, 1e-3, skip_pad_row);
    CHECK(rep.pass);
}

TEST_CASE("pad row of a fresh embedding is zero") {
    Rng rng(8);
    EmbeddingTable table = make_embedding(10, 4, rng);
    for (std::size_t e = 0; e < 4; ++e) CHECK(table.weights(0, e) == 0.0);
}
