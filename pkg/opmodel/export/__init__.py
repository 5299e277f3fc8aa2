# Report envelopes and tables
from .reports import Report, file_digest
from .tables import dims_table, flags_table, write_table_csv
