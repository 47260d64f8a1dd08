// Every public header must compile standalone in one translation unit.
#include "hybridnet/channel.hpp"
#include "hybridnet/cli.hpp"
#include "hybridnet/common.hpp"
#include "hybridnet/config.hpp"
#include "hybridnet/cutset.hpp"
#include "hybridnet/harness.hpp"
#include "hybridnet/io.hpp"
#include "hybridnet/netgen.hpp"
#include "hybridnet/protocols.hpp"
#include "hybridnet/regimes.hpp"
#include "hybridnet/routing.hpp"

#include <iostream>

int main() {
  hybridnet::NetworkConfig cfg;
  cfg.n = 64;
  cfg.beta = 0.5;
  cfg.gamma = 0.25;
  cfg.seed = 1;
  hybridnet::validate(cfg);
  const auto net = hybridnet::generate_network(cfg);
  std::cout << "smoke ok: n=" << net.config.n << " m=" << net.m << " l=" << net.l << "\n";
  return 0;
}
