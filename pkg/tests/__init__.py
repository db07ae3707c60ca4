"""Test suite for coldseq."""
