"""Compact dynamic tries with quotient hashing and compact displacement arrays."""

from .bitvec import BitReader, BitString, BitWriter, PackedArray, SelectIndex
from .cht import CompactHashTable
from .darray import GammaBlockArray, LayeredArray, create_array
from .errors import CapacityError, FormatError, InvalidNodeError, NotFoundError
from .hashqr import QuotientHash, find_prime
from .ingest import Dataset, read_fastq, read_fimi, read_lines
from .oracle import OracleTrie, ShadowMap
from .traverse import build_index, build_sorted_index, dfs, naive_dfs, sorted_strings
from .trie import MBonsaiTrie

__all__ = [
    "BitReader", "BitString", "BitWriter", "PackedArray", "SelectIndex",
    "CompactHashTable", "GammaBlockArray", "LayeredArray", "create_array",
    "CapacityError", "FormatError", "InvalidNodeError", "NotFoundError",
    "QuotientHash", "find_prime", "Dataset", "read_fastq", "read_fimi", "read_lines",
    "OracleTrie", "ShadowMap", "build_index", "build_sorted_index", "dfs",
    "naive_dfs", "sorted_strings", "MBonsaiTrie",
]
