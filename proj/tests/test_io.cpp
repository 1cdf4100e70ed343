#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>

#include "paritylock/io.hpp"
#include "paritylock/preparation.hpp"

using namespace paritylock;

TEST_SUITE("io") {

TEST_CASE("state JSON round trip is bit-faithful") {
    const auto psi = prepare(build_half_transfer_sequence(7, sample_phase_vectors(7, 1, 3)[0]));
    const auto back = state_from_json(json::parse(to_json(psi).dump()));
    REQUIRE(back.n_max() == psi.n_max());
    CHECK(std::memcmp(back.amps().data(), psi.amps().data(), psi.dim() * sizeof(cplx)) == 0);
}

TEST_CASE("density JSON round trip") {
    const auto rho = JointDensity::pure(prepare(build_half_transfer_sequence(3, {0.1, 0.2, 0.3}), 6));
    const auto back = density_from_json(json::parse(to_json(rho).dump()));
    CHECK(back.matrix() == rho.matrix());
    CHECK_THROWS_AS(state_from_json(json{{"amps", json::array()}}), Error);
}

TEST_CASE("pulse and model JSON") {
    const auto p = PulseSpec::make(PulseKind::RSB, 1.25, 0.5, RabiModel::beyond_ld(0.0629));
    const auto q = pulse_from_json(to_json(p));
    CHECK(q.kind == p.kind);
    CHECK(q.area == p.area);
    CHECK(q.phase == p.phase);
    CHECK(q.rabi_model.eta == p.rabi_model.eta);
    const auto m = model_from_json(json{{"kind", "w-power"}, {"w", 0.8}});
    CHECK(m.kind == DecoherenceModel::Kind::WPower);
    CHECK(m.w == 0.8);
    CHECK_THROWS_AS(model_from_json(json{{"kind", "bogus"}}), Error);
}

TEST_CASE("config hash is stable and sensitive") {
    const json a = {{"N", 8}, {"seed", 7}};
    CHECK(config_hash(a) == config_hash(json::parse(a.dump())));
    CHECK(config_hash(a) != config_hash(json{{"N", 8}, {"seed", 8}}));
    CHECK(config_hash(a).size() == 16);
}

TEST_CASE("flop CSV round trip and parse errors") {
    RabiFlopRecord r{{0.0, 0.1, 0.25}, {1.0, 0.5, 0.123456789012345}, 100};
    const auto path = std::filesystem::temp_directory_path() / "paritylock_io_test.csv";
    write_flop_csv(path, {"test", json{{"k", 1}}, 3}, r);
    std::ifstream f(path);
    std::string first;
    std::getline(f, first);
    CHECK(first.rfind("# paritylock", 0) == 0);
    const auto back = read_flop_csv(path);
    CHECK(back.times == r.times);
    CHECK(back.pg == r.pg);
    CHECK(back.shots_per_point == 100);
    std::filesystem::remove(path);

    auto line_of = [](const std::string& text) {
        try {
            parse_flop_csv(text);
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::ParseError);
            return std::string(e.what());
        }
        return std::string();
    };
    CHECK(line_of("time_ms,pg,shots\n0.1,0.5,100\n0.2,x,100\n").find("line 3") != std::string::npos);
    CHECK(line_of("# c\ntime,pg,shots\n").find("line 2") != std::string::npos);
    CHECK(line_of("time_ms,pg,shots\n0.1,0.5\n").find("line 2") != std::string::npos);
    CHECK(line_of("time_ms,pg,shots\n0.1,1.5,100\n").find("line 2") != std::string::npos);
}

}
