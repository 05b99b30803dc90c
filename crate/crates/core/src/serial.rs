//! JSON interchange schemas (twisted/v1).
