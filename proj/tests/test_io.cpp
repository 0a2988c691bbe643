#include <cmath>

#include <gtest/gtest.h>

#include "bilinear/io.hpp"
#include "fixtures.hpp"
#include "generators.hpp"

using namespace bilinear;
using io::Json;

TEST(TensorJson, RoundTrip) {
    auto rng = gen::rng_for(61);
    for (int n = 0; n < 20; ++n) {
        auto t = gen::random_tensor(gen::random_dims(rng, 1, 4), rng);
        t.set_name("r" + std::to_string(n));
        const auto text = io::dump(io::to_json(t));
        const auto back = io::parse_tensor(text);
        EXPECT_EQ(back, t);
        EXPECT_EQ(back.name(), t.name());
    }
}

TEST(TensorJson, NameIsOptional) {
    const auto t = io::parse_tensor(R"({"dims":[1,1,2],"values":[1,2]})");
    EXPECT_FALSE(t.name());
    EXPECT_EQ(t(0, 0, 1), 2.0);
}

TEST(TensorJson, RejectsMalformedInput) {
    EXPECT_THROW(io::parse_tensor("{"), io::InputError);
    EXPECT_THROW(io::parse_tensor("[]"), io::InputError);
    EXPECT_THROW(io::parse_tensor(R"({"dims":[1,1],"values":[1]})"), io::InputError);
    EXPECT_THROW(io::parse_tensor(R"({"dims":[1,1,0],"values":[]})"), io::InputError);
    EXPECT_THROW(io::parse_tensor(R"({"dims":[1,1,-2],"values":[1,2]})"), io::InputError);
    EXPECT_THROW(io::parse_tensor(R"({"dims":[1,1,1.5],"values":[1]})"), io::InputError);
    EXPECT_THROW(io::parse_tensor(R"({"dims":[1,1,2],"values":[1]})"), io::InputError);
    EXPECT_THROW(io::parse_tensor(R"({"dims":[1,1,2],"values":[1,"a"]})"), io::InputError);
    EXPECT_THROW(io::parse_tensor(R"({"dims":[1,1,1],"values":[1],"name":3})"), io::InputError);
    EXPECT_THROW(io::parse_tensor(R"({"values":[1]})"), io::InputError);
    EXPECT_THROW(io::read_tensor_file("/nonexistent/tensor.json"), io::InputError);
}

TEST(Dump, SeventeenSignificantDigits) {
    Json j;
    j["a"] = 0.1;
    j["b"] = 3.0;
    j["c"] = std::vector<double>{1.0 / 3.0};
    j["n"] = 7;
    j["s"] = "x";
    j["nested"] = Json::array({Json::object({{"v", 2.5}})});
    const auto text = io::dump(j, -1);
    EXPECT_EQ(text, R"({"a":0.10000000000000001,"b":3,"c":[0.33333333333333331],"n":7,"s":"x","nested":[{"v":2.5}]})");
    // Lossless.
    const auto back = Json::parse(text);
    EXPECT_EQ(back["c"][0].get<double>(), 1.0 / 3.0);
}

TEST(Dump, IndentedScalarArraysStayOnOneLine) {
    Json j;
    j["x"] = std::vector<double>{1, 2};
    EXPECT_EQ(io::dump(j), "{\n  \"x\": [1, 2]\n}");
}

TEST(TriplesJson, ParsesAndChecksDimensions) {
    const auto t = fixtures::example1();
    const auto good = Json::parse(R"({"triples":[{"tau":3,"x":[0,1,0],"y":[0,1],"z":[0,1,0,0]}]})");
    const auto triples = io::triples_from_json(good, t);
    ASSERT_EQ(triples.size(), 1u);
    EXPECT_EQ(triples[0].max_residual(), 0.0);
    const auto bad = Json::parse(R"({"triples":[{"tau":3,"x":[0,1],"y":[0,1],"z":[0,1,0,0]}]})");
    EXPECT_THROW(io::triples_from_json(bad, t), io::InputError);
    EXPECT_THROW(io::triples_from_json(Json::parse(R"({"triples":[{"x":[0,1,0]}]})"), t), io::InputError);
    EXPECT_THROW(io::triples_from_json(Json::parse("[]"), t), io::InputError);
}

TEST(RepresentationJson, RoundTripVerifies) {
    const auto t = fixtures::cube3();
    const auto r = schmidt_decompose(t);
    const auto text = io::dump(io::to_json(r.representation));
    const auto back = io::representation_from_json(Json::parse(text));
    EXPECT_EQ(back.status, SchmidtStatus::Complete);
    ASSERT_EQ(back.terms.size(), 3u);
    EXPECT_EQ(back.terms[0].tau, r.representation.terms[0].tau);
    EXPECT_EQ(back.terms[2].z, r.representation.terms[2].z);
    EXPECT_TRUE(verify_representation(t, back, 1e-9).passed());
}

TEST(RepresentationJson, RejectsMalformed) {
    EXPECT_THROW(io::representation_from_json(Json::parse(R"({"dims":[1,1,1],"terms":[]})")), io::InputError);
    EXPECT_THROW(io::representation_from_json(Json::parse(R"({"dims":[1,1,1],"terms":[],"status":"Maybe"})")),
                 io::InputError);
    EXPECT_THROW(io::representation_from_json(
                     Json::parse(R"({"dims":[1,1,1],"status":"Complete","terms":[{"tau":1,"x":[1],"y":[1]}]})")),
                 io::InputError);
}
