# Crypto market data aggregator package
