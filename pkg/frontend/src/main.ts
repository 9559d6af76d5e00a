import { HttpApiClient } from './api';
import { render } from './render';
import { ExplorerController } from './state';

const client = new HttpApiClient('');
const controller = new ExplorerController(client);

const root = document.getElementById('app')!;
const form = document.getElementById('search-form') as HTMLFormElement;
const queryInput = document.getElementById('query') as HTMLInputElement;
const granularityInput = document.getElementById('granularity') as HTMLInputElement;
const scorerSelect = document.getElementById('scorer') as HTMLSelectElement;
const scopeSelect = document.getElementById('scope') as HTMLSelectElement;

controller.onChange((state) => render(state, controller, root));

form.addEventListener('submit', (event) => {
  event.preventDefault();
  void controller.submitQuery(queryInput.value, {
    scorer: scorerSelect.value as 'bm25' | 'tfidf',
    scope: scopeSelect.value as 'title+abstract' | 'abstract',
    granularity: Number(granularityInput.value),
  });
});

granularityInput.addEventListener('change', () => {
  const g = Number(granularityInput.value);
  void controller.adjustGranularity(g).then((accepted) => {
    granularityInput.setCustomValidity(accepted ? '' : 'must be >= 1');
    granularityInput.reportValidity();
  });
});
