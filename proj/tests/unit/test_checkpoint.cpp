#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "ddecc/checkpoint.hpp"
#include "ddecc/error.hpp"
#include "ddecc/rng.hpp"

using namespace ddecc;
using namespace ddecc::nn;

TEST(Checkpoint, RoundTripIsBitExact) {
    const auto h = builtin_code("hamming74");
    for (auto backbone : {Backbone::mlp, Backbone::masked_attention}) {
        DenoiserModel m(h, ArchConfig{backbone, 8, 2, 2, 0}, 4);
        const auto bytes = serialize_checkpoint(m, {{"seed", "4"}});
        const auto loaded = deserialize_checkpoint(bytes, h);
        EXPECT_EQ(loaded.metadata.at("seed"), "4");
        EXPECT_EQ(loaded.model.arch().backbone, backbone);
        Rng rng(1);
        for (int i = 0; i < 100; ++i) {
            std::vector<double> f(10);
            for (auto& v : f) v = std::abs(rng.normal());
            const std::size_t e = rng.below(4);
            EXPECT_EQ(m.forward(f, e), loaded.model.forward(f, e));
        }
        EXPECT_EQ(serialize_checkpoint(loaded.model, loaded.metadata), bytes);
    }
}

TEST(Checkpoint, FileRoundTrip) {
    const auto h = builtin_code("rep31");
    DenoiserModel m(h, ArchConfig{Backbone::mlp, 4, 1, 1, 0}, 9);
    const auto path = std::filesystem::temp_directory_path() / "ddecc_ckpt_test.bin";
    save_checkpoint(m, path, {{"note", "x"}});
    const auto loaded = load_checkpoint(path, h);
    EXPECT_EQ(loaded.model.forward(std::vector<double>{1, 1, 1, 0, 0}, 0), m.forward(std::vector<double>{1, 1, 1, 0, 0}, 0));
    std::filesystem::remove(path);
    EXPECT_THROW(load_checkpoint(path, h), Error);
}

TEST(Checkpoint, TruncatedOrCorrupt) {
    const auto h = builtin_code("rep31");
    DenoiserModel m(h, ArchConfig{Backbone::mlp, 4, 1, 1, 0}, 9);
    const auto bytes = serialize_checkpoint(m);
    EXPECT_THROW(deserialize_checkpoint(bytes.substr(0, bytes.size() / 2), h), CorruptFileError);
    EXPECT_THROW(deserialize_checkpoint(bytes.substr(0, 10), h), CorruptFileError);
    auto flipped = bytes;
    flipped[flipped.size() / 2] ^= 0x40;
    EXPECT_THROW(deserialize_checkpoint(flipped, h), CorruptFileError);
    EXPECT_THROW(deserialize_checkpoint("NOTACKPT" + bytes.substr(8), h), CorruptFileError);
}

TEST(Checkpoint, VersionMismatch) {
    const auto h = builtin_code("rep31");
    DenoiserModel m(h, ArchConfig{Backbone::mlp, 4, 1, 1, 0}, 9);
    auto bytes = serialize_checkpoint(m);
    bytes[8] = 7;  // version field follows the 8-byte magic
    const std::string body = bytes.substr(0, bytes.size() - 8);
    const std::uint64_t sum = fnv1a64(body);
    std::string fixed = body;
    for (int i = 0; i < 8; ++i) fixed.push_back(static_cast<char>((sum >> (8 * i)) & 0xff));
    EXPECT_THROW(deserialize_checkpoint(fixed, h), VersionError);
}

TEST(Checkpoint, WrongCodeIsShapeError) {
    DenoiserModel m(builtin_code("hamming74"), ArchConfig{}, 1);
    const auto bytes = serialize_checkpoint(m);
    EXPECT_THROW(deserialize_checkpoint(bytes, builtin_code("hamming1511")), ShapeError);
}

TEST(Checkpoint, MetadataWithoutCode) {
    DenoiserModel m(builtin_code("hamming74"), ArchConfig{}, 1);
    const auto bytes = serialize_checkpoint(m, {{"command", "train"}});
    EXPECT_TRUE(is_checkpoint(bytes));
    const auto meta = checkpoint_metadata(bytes);
    EXPECT_EQ(meta.size(), 1u);
    EXPECT_EQ(meta.at("command"), "train");
    EXPECT_FALSE(is_checkpoint("# command=bench\n"));
}
