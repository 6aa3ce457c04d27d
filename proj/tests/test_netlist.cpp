#include <gtest/gtest.h>

#include <sstream>

#include "spikeflow/error.hpp"
#include "spikeflow/netlist.hpp"

using namespace spikeflow;

TEST(Netlist, RoundTrip) {
  std::istringstream in(
      "# two neurons\n"
      "N 1 3 0 1/2 0 readout\n"
      "N 0 1 0 1 1 transmitter\n"
      "S 0 1 2 -4\n"
      "SCHED 1 7\n");
  const auto net = parse_netlist(in);
  ASSERT_EQ(net.size(), 2u);
  EXPECT_EQ(net.neuron(1).leak, (Leak{1, 2}));
  EXPECT_EQ(net.neuron(1).role, Role::readout);
  EXPECT_EQ(net.synapses()[0].weight, -4);
  std::ostringstream out;
  write_netlist(out, net);
  std::istringstream again(out.str());
  const auto net2 = parse_netlist(again);
  std::ostringstream out2;
  write_netlist(out2, net2);
  EXPECT_EQ(out.str(), out2.str());
}

TEST(Netlist, ErrorsCarryLineNumbers) {
  std::istringstream in("N 0 1 0 1 1 standard\nS 0 9 1 1\n");
  try {
    parse_netlist(in);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  std::istringstream bad_role("N 0 1 0 1 1 wizard\n");
  EXPECT_THROW(parse_netlist(bad_role), ParseError);
  std::istringstream gap("N 0 1 0 1 1 standard\nN 2 1 0 1 1 standard\n");
  EXPECT_THROW(parse_netlist(gap), ParseError);
  std::istringstream junk("Q 1\n");
  EXPECT_THROW(parse_netlist(junk), ParseError);
}

TEST(Netlist, ResetMode) {
  std::istringstream in("MODE overflow\nN 0 2 0 1 0 standard\n");
  const auto net = parse_netlist(in);
  EXPECT_EQ(net.reset_mode, ResetMode::overflow);
  std::ostringstream out;
  write_netlist(out, net);
  EXPECT_EQ(out.str().rfind("MODE overflow\n", 0), 0u);
  std::istringstream bad("MODE soft\n");
  EXPECT_THROW(parse_netlist(bad), ParseError);
  std::istringstream plain("N 0 2 0 1 0 standard\n");
  EXPECT_EQ(parse_netlist(plain).reset_mode, ResetMode::fixed);
}
