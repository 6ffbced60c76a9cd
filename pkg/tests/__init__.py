# Test package for crypto market data aggregator
