#include <gtest/gtest.h>

#include "spikeflow/error.hpp"
#include "spikeflow/oracle.hpp"

using namespace spikeflow;

TEST(Oracle, TransmitterReadoutTape) {
  Machine m;
  m.write_neuron({.threshold = 1, .v0 = 1, .role = Role::readout});
  auto c = m.consult(OracleMode::transducer, 3, "search");
  ASSERT_FALSE(c.tape.end());
  EXPECT_EQ(c.tape.read(), (SpikeEvent{0, 0}));
  EXPECT_TRUE(c.tape.end());
  EXPECT_THROW(c.tape.read(), InputError);
  EXPECT_EQ(c.record.timesteps, 3);
  EXPECT_EQ(c.record.energy, 1);
}

TEST(Oracle, EmptyTapeIsAtEnd) {
  OutputTape tape;
  EXPECT_TRUE(tape.end());
  EXPECT_THROW(tape.read(), InputError);
}

TEST(Oracle, TapeKeepsOnlyDesignatedRolesInOrder) {
  Machine m;
  const auto a = m.write_neuron({.threshold = 1, .v0 = 1});
  const auto r2 = m.write_neuron({.threshold = 1, .role = Role::readout});
  const auto r1 = m.write_neuron({.threshold = 1, .role = Role::readout});
  m.write_synapse({a, r1, 1, 1});
  m.write_synapse({a, r2, 1, 1});
  auto c = m.consult(OracleMode::transducer, 4);
  const std::vector<SpikeEvent> expected{{1, r2}, {1, r1}};
  std::vector<SpikeEvent> sorted = expected;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(c.tape.events(), sorted);
  EXPECT_EQ(c.record.energy, 3);
}

TEST(Oracle, DeciderReturnsAcceptBit) {
  Machine m;
  const auto acc = m.write_neuron({.threshold = 100, .role = Role::accept});
  m.write_schedule(acc, 2);
  auto c = m.consult(OracleMode::decider, 5);
  EXPECT_TRUE(c.accepted);
  EXPECT_EQ(c.record.timesteps, 3);
}

TEST(Oracle, DeciderRejectAndUndecided) {
  Machine m;
  const auto rej = m.write_neuron({.threshold = 1, .v0 = 1, .role = Role::reject});
  m.write_neuron({.threshold = 100, .role = Role::accept});
  EXPECT_FALSE(m.consult(OracleMode::decider, 5).accepted);
  m.write_voltage(rej, -1);
  EXPECT_THROW(m.consult(OracleMode::decider, 5), UndecidedError);
}

TEST(Oracle, ChainSearchTape) {
  const std::int64_t K = 3;
  Machine m;
  const auto T = m.write_neuron({.threshold = 1, .v0 = 1, .role = Role::transmitter});
  const auto h0 = m.write_neuron({.threshold = K + 1, .v0 = K});
  const auto h1 = m.write_neuron({.threshold = K + 1, .v0 = K});
  const auto r0 = m.write_neuron({.threshold = K + 1, .v0 = K, .role = Role::readout});
  const auto r1 = m.write_neuron({.threshold = K + 1, .v0 = K, .role = Role::readout});
  m.write_synapse({T, h1, 1, 1});
  m.write_synapse({h1, h0, 1, 1});
  m.write_synapse({h0, r0, 1, 1});
  m.write_synapse({r0, r1, 1, 1});
  m.mark_stop(r1);
  auto c = m.consult(OracleMode::transducer, 5);
  EXPECT_EQ(c.tape.read(), (SpikeEvent{3, r0}));
  EXPECT_EQ(c.tape.read(), (SpikeEvent{4, r1}));
  EXPECT_TRUE(c.tape.end());
  EXPECT_EQ(m.read_spike_time(h0), 2);
  EXPECT_EQ(m.read_spike_time(T), 0);
}

TEST(Oracle, MeteringCountsEveryOperation) {
  Machine m;
  EXPECT_EQ(m.report().controller_time, 0);
  m.tick();
  m.tick();
  m.tick();
  EXPECT_EQ(m.report().controller_time, 3);
  const auto n = m.write_neuron({.threshold = 8, .v0 = 5});
  m.write_voltage(n, 3);
  EXPECT_EQ(m.read_voltage(n), 8);
  EXPECT_EQ(m.report().controller_time, 6);
}

TEST(Oracle, WritesPersistAcrossConsultations) {
  Machine m;
  const auto c = m.write_neuron({.threshold = 8, .v0 = 5, .role = Role::readout});
  EXPECT_TRUE(m.consult(OracleMode::transducer, 2).tape.events().empty());
  m.write_voltage(c, 3);
  EXPECT_EQ(m.consult(OracleMode::transducer, 2).tape.size(), 1u);
  // Re-armed: the consultation's reset does not leak into the stored value.
  EXPECT_EQ(m.read_voltage(c), 8);
  EXPECT_EQ(m.consult(OracleMode::transducer, 2).tape.size(), 1u);
  EXPECT_THROW(m.write_voltage(c, -9), InputError);
}

TEST(Oracle, WorkingMemoryCapacityEnforced) {
  Machine m(2);
  m.wm_write(0, 4);
  m.wm_write(1, 5);
  EXPECT_EQ(m.wm_read(1), 5);
  EXPECT_THROW(m.wm_write(2, 1), WorkingMemoryError);
  EXPECT_EQ(m.report().controller_wm_peak, 2);
}

TEST(Oracle, ReportAggregatesAndSerializes) {
  ResourceReport r;
  r.consultations.push_back({"search", 5, 10, 4});
  r.consultations.push_back({"path", 3, 12, 2});
  EXPECT_EQ(r.oracle_time(), 5);
  EXPECT_EQ(r.oracle_space(), 12);
  EXPECT_EQ(r.oracle_energy(), 6);
  const auto j = r.to_json();
  EXPECT_EQ(j.at("oracle_energy"), 6);
  EXPECT_EQ(j.at("consultations").at("timesteps").size(), 2u);
  for (const char* key : {"controller_time", "controller_wm_peak", "oracle_time", "oracle_space"})
    EXPECT_TRUE(j.contains(key)) << key;
}

TEST(Oracle, TruncateDropsStopNeurons) {
  Machine m;
  m.write_neuron({.threshold = 1, .v0 = 1});
  const auto x = m.write_neuron({.threshold = 100, .role = Role::readout});
  m.mark_stop(x);
  m.truncate(1);
  EXPECT_EQ(m.network().size(), 1u);
  EXPECT_EQ(m.consult(OracleMode::transducer, 4).record.timesteps, 4);
}
