//! Discrete Monge-Ampère machinery.
